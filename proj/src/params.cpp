#include "biostab/params.hpp"

#include <sstream>
#include <stdexcept>

namespace biostab {

std::vector<std::string> validate(const Params& p)
{
    std::vector<std::string> errors;
    auto fail = [&errors](const std::string& msg) { errors.push_back(msg); };

    if (!(p.schmidt > 0.0)) fail("schmidt must be > 0");
    if (!(p.swim_speed >= 0.0)) fail("swim_speed must be >= 0");
    if (!(p.extinction > 0.0)) fail("extinction must be > 0");
    if (!(p.albedo >= 0.0)) fail("albedo must be >= 0");
    if (!(p.albedo < 1.0)) fail("albedo must be < 1");
    if (!(p.aniso >= -1.0 && p.aniso <= 1.0)) fail("aniso must be in [-1, 1]");
    if (!(p.critical_intensity > 0.0)) fail("critical_intensity must be > 0");
    if (!(p.source_intensity > 0.0)) fail("source_intensity must be > 0");
    if (!(p.taylor >= 0.0)) fail("taylor must be >= 0");

    if (p.nz < 8) fail("nz must be >= 8");
    if (p.nz % 2 == 0) fail("nz must be odd");
    if (p.ntau < 8) fail("ntau must be >= 8");
    if (p.ntau % 2 == 0) fail("ntau must be odd");
    if (p.nmu < 8) fail("nmu must be >= 8");
    if (p.nphi < 8) fail("nphi must be >= 8");
    if (p.nphi % 2 != 0) fail("nphi must be even");

    if (!(p.taxis_mmax > 0.0 && p.taxis_mmax <= 1.0))
        fail("taxis_mmax must be in (0, 1]");
    if (!(p.taxis_steepness > 0.0)) fail("taxis_steepness must be > 0");

    return errors;
}

void validate_or_throw(const Params& p)
{
    const auto errors = validate(p);
    if (errors.empty()) return;
    std::ostringstream os;
    os << "invalid parameters:";
    for (const auto& e : errors) os << "\n  - " << e;
    throw std::invalid_argument(os.str());
}

}  // namespace biostab
