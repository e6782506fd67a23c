#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "biostab/base_state.hpp"
#include "biostab/special.hpp"

namespace biostab {

using complexd = std::complex<double>;

// Perturbed radiation moments for one wavenumber and one concentration
// perturbation. Gc/Gd are the collimated/diffuse parts of the perturbed
// total intensity, P/Q the horizontal flux components, S the full vertical
// flux perturbation (collimated + diffuse). Psi keeps the per-direction
// diffuse field, column d matching quad.directions[d].
struct PerturbedRadiation {
    double k = 0.0;
    Eigen::VectorXcd Gc, Gd, P, Q, S;
    Eigen::MatrixXcd Psi;
    int iterations = 0;
};

// Perturbed collimated intensity: Gc(z) = kappa * G_s^c(z) * Theta(z),
// with Theta(z) = int_1^z N dz'.
Eigen::VectorXcd perturbed_collimated(const BaseState& base, const Params& p,
                                      const Eigen::VectorXcd& theta);

// Real coefficient profiles of the concentration equation that come from
// the base light field.
struct StabilityProfiles {
    Eigen::VectorXd lambda1;  // kappa V_c D(n G_s^c dM/dG)
    Eigen::VectorXd lambda2;  // 2 kappa V_c n G_s^c dM/dG + V_c dM/dG DG_s^d
    Eigen::VectorXd lambda3;  // V_c M
};

StabilityProfiles lambda_profiles(const BaseState& base, const Params& p);

// Dense linear response of the radiation field to the concentration
// eigenfunction at fixed wavenumber: all maps act on node samples of
// Theta. With m = 0 and the phi grid closed under reflection the pencil
// stays real: Gd and Sd are real matrices and P = i * Pim * Theta with
// Pim real. L0 realizes the nonlocal coefficient
//   Lambda0 = V_c D(n Gd dM/dG) - i (V_c n M / q) k P.
struct RadiationOperators {
    double k = 0.0;
    Eigen::MatrixXd Gd;   // Theta -> diffuse perturbed intensity
    Eigen::MatrixXd Sd;   // Theta -> diffuse vertical flux perturbation
    Eigen::MatrixXd Pim;  // Theta -> Im(P); P itself is i * Pim * Theta
    Eigen::MatrixXd L0;   // Theta -> Lambda0 samples
};

// Transport context frozen for one (base state, angular quadrature) pair:
// per-direction step propagators and the base diffuse intensity
// L_s^d(z, nu) that sources the perturbed equation.
class PerturbationContext {
  public:
    PerturbationContext(const BaseState& base, const Params& params,
                        const AngularQuadrature& quad);

    // Fixed-point (source iteration) solve of the per-direction transport
    // equation: marches every quadrature direction, re-forms the moment
    // sources, and stops when successive Gd and S iterates differ by less
    // than tol in max norm.
    PerturbedRadiation solve_diffuse(double k, const Eigen::VectorXcd& ntilde,
                                     const Eigen::VectorXcd& theta,
                                     double tol = 1e-10, int max_iter = 300) const;

    // Direct assembly of the same converged linear map: builds the
    // moment-transfer matrices direction by direction with the identical
    // step propagators and solves the 2nz x 2nz fixed-point system exactly.
    RadiationOperators response_operators(double k) const;

    const BaseState& base() const { return base_; }
    const Params& params() const { return params_; }
    const AngularQuadrature& quad() const { return quad_; }

    // Base diffuse intensity per polar direction (column i: nu = +mu[i]
    // for i < nmu, nu = -mu[i - nmu] otherwise).
    const Eigen::MatrixXd& base_diffuse() const { return base_diffuse_; }

  private:
    struct StepData;  // per-direction march step (propagator + source weights)

    void build_step_data(double nu, double xi, double k,
                         std::vector<StepData>& out) const;
    void march(const std::vector<StepData>& steps, double nu,
               const Eigen::VectorXcd& source, Eigen::VectorXcd& psi) const;

    const BaseState& base_;
    const Params& params_;
    const AngularQuadrature& quad_;

    Eigen::MatrixXd base_diffuse_;  // nz x 2nmu

    // cubic source/extinction models per step and march orientation
    struct StepGeometry;
    std::vector<StepGeometry> geom_up_, geom_down_;
};

RadiationOperators radiative_response_matrix(const PerturbationContext& ctx,
                                             double k);

}  // namespace biostab
