#pragma once

#include <optional>
#include <string>

#include <Eigen/Dense>

#include "biostab/base_state.hpp"
#include "biostab/perturb_radiative.hpp"

namespace biostab {

// Eigenpair of the rotating stability problem at one (k, R, T_a).
// Normalization: max |W| = 1 with W real and positive at its
// max-magnitude node (falls back to the largest field when W vanishes).
struct EigenSolution {
    complexd sigma;
    Eigen::VectorXcd W, Z, Theta, Ntilde;
    double k = 0.0, R = 0.0, Ta = 0.0;
};

// One point of the marginal curve. oscillatory iff |Im sigma| > 1e-5.
struct NeutralPoint {
    bool found = false;
    double k = 0.0, R = 0.0, im_sigma = 0.0;
    bool oscillatory = false;
    std::string note;
};

// Generalized pencil A x = sigma B x of the linearized system in
// (W, Z, Theta) on the shared z-grid, with fourth-order interior stencils
// and one-sided boundary closures. R enters A affinely: A = A0 + R * E.
struct StabilityPencil {
    Eigen::MatrixXd A0;  // R-independent part
    Eigen::MatrixXd E;   // dA/dR (buoyancy rows)
    Eigen::MatrixXd B;   // sigma coefficient; zero on boundary rows
    int nz = 0;
    bool with_vorticity = true;
};

StabilityPencil assemble_system(const BaseState& base, const StabilityProfiles& coeffs,
                                const RadiationOperators& ops, const Params& p,
                                double k, bool with_vorticity = true);

// Growth-rate solver bound to one assembled pencil; R is supplied per call.
class StabilitySolver {
  public:
    StabilitySolver(const BaseState& base, const StabilityProfiles& coeffs,
                    const RadiationOperators& ops, const Params& p, double k,
                    bool with_vorticity = true);

    // Full QZ solve; returns the eigenpair with maximal Re sigma after
    // filtering infinite and spurious (|sigma| > 1e8) modes.
    EigenSolution growth_rate(double R) const;

    // Rightmost eigenvalue near the origin by shift-inverted Arnoldi;
    // falls back to the QZ path when the Krylov results look unconverged.
    complexd max_sigma(double R) const;

    // Marginal point at this wavenumber: stationary candidates from the
    // sigma = 0 Rayleigh eigenproblem, then a secant/bisection hybrid on
    // Re sigma_max(R) whenever an oscillatory mode is still unstable
    // there. qz_verify re-checks the returned point with the full QZ
    // spectrum.
    NeutralPoint neutral_rayleigh(std::optional<std::pair<double, double>> bracket =
                                      std::nullopt,
                                  bool qz_verify = false) const;

    // Stationary-branch Rayleigh numbers at this k (real positive
    // eigenvalues of A0 x = -R E x), ascending.
    std::vector<double> stationary_rayleigh_candidates() const;

    const StabilityPencil& pencil() const { return pencil_; }
    double k() const { return k_; }

  private:
    complexd max_sigma_arnoldi(double R, bool& trusted) const;

    StabilityPencil pencil_;
    const Params& params_;
    double k_;
};

}  // namespace biostab
