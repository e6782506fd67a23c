#include "biostab/taxis.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "biostab/params.hpp"

namespace biostab {

TaxisFunction make_tanh_taxis(double m_max, double steepness, double G_c)
{
    auto eval = [m_max, steepness, G_c](double G) -> std::pair<double, double> {
        const double u = steepness * (G_c - G);
        const double t = std::tanh(u);
        return {m_max * t, -m_max * steepness * (1.0 - t * t)};
    };
    return TaxisFunction("tanh", {m_max, steepness, G_c}, eval);
}

TaxisFunction make_tanh_taxis(const Params& p)
{
    return make_tanh_taxis(p.taxis_mmax, p.taxis_steepness, p.critical_intensity);
}

std::pair<double, double> taxis_eval(const TaxisFunction& taxis, double G)
{
    return taxis(G);
}

std::vector<std::string> validate_taxis(const TaxisFunction& taxis, double G_c,
                                        int samples)
{
    std::vector<std::string> errors;
    const double G_max = 3.0 * G_c;
    double prev = 0.0;
    bool have_prev = false;

    for (int i = 0; i <= samples; ++i) {
        const double G = G_max * i / samples;
        const auto [M, dM] = taxis(G);

        if (!std::isfinite(M) || !std::isfinite(dM)) {
            errors.push_back("taxis returned non-finite value at G = " + std::to_string(G));
            break;
        }
        if (std::abs(M) > 1.0 + 1e-12)
            errors.push_back("taxis |M| exceeds 1 at G = " + std::to_string(G));
        if (G < G_c - 1e-9 && M < 0.0)
            errors.push_back("taxis M must be >= 0 below G_c, violated at G = " +
                             std::to_string(G));
        if (G > G_c + 1e-9 && M >= 0.0)
            errors.push_back("taxis M must be < 0 above G_c, violated at G = " +
                             std::to_string(G));

        // Continuity: neighbouring samples must not jump more than the
        // local slope allows (loose factor for curvature).
        if (have_prev) {
            const double h = G_max / samples;
            const double bound = 50.0 * h * (1.0 + std::abs(dM));
            if (std::abs(M - prev) > bound + 1e-9)
                errors.push_back("taxis M appears discontinuous near G = " +
                                 std::to_string(G));
        }
        prev = M;
        have_prev = true;

        // Derivative against centered differences, 1e-6 relative.
        const double h = 1e-6 * G_max;
        if (G > h && G < G_max - h) {
            const double fd = (taxis(G + h).first - taxis(G - h).first) / (2.0 * h);
            const double scale = std::max({std::abs(dM), std::abs(fd), 1e-8});
            if (std::abs(fd - dM) > 1e-6 * scale)
                errors.push_back("taxis dM/dG disagrees with finite differences at G = " +
                                 std::to_string(G));
        }
        if (errors.size() > 8) break;  // enough evidence
    }
    return errors;
}

void validate_taxis_or_throw(const TaxisFunction& taxis, double G_c)
{
    const auto errors = validate_taxis(taxis, G_c);
    if (errors.empty()) return;
    std::ostringstream os;
    os << "invalid taxis function '" << taxis.name() << "':";
    for (const auto& e : errors) os << "\n  - " << e;
    throw std::invalid_argument(os.str());
}

}  // namespace biostab
