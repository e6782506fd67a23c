#pragma once

#include <string>
#include <vector>

namespace biostab {

// Dimensionless control numbers of a run. Immutable after validation;
// safe to share across parallel workers.
struct Params {
    double schmidt = 20.0;          // S_c
    double swim_speed = 20.0;       // V_c
    double extinction = 0.5;        // kappa, total optical depth at unit concentration
    double albedo = 0.42;           // omega in [0,1)
    double aniso = 0.0;             // A in [-1,1], > 0 forward scattering
    double critical_intensity = 1.0;  // G_c
    double source_intensity = 1.0;    // L_t
    double taylor = 0.0;            // T_a

    int nz = 201;     // z-grid nodes (odd, so z = 1/2 is a node)
    int ntau = 201;   // optical-depth grid nodes (odd for Simpson panels)
    int nmu = 32;     // polar quadrature nodes per hemisphere
    int nphi = 24;    // azimuthal quadrature nodes (even)

    // Taxis response M(G) = m_max * tanh(s * (G_c - G)).
    double taxis_mmax = 0.8;
    double taxis_steepness = 2.0;
};

// Returns an empty list when all invariants hold; otherwise one message
// per violated invariant, each naming the field and the violated bound.
std::vector<std::string> validate(const Params& p);

// Throwing convenience wrapper around validate().
void validate_or_throw(const Params& p);

}  // namespace biostab
