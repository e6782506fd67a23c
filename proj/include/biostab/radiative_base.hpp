#pragma once

#include <Eigen/Dense>

#include "biostab/params.hpp"

namespace biostab {

// Steady radiation field of the uniform-illumination slab, sampled on a
// uniform optical-depth grid tau in [0, kappa]. G is the total intensity,
// q the magnitude of the (downward) radiative flux. The concentration
// normalization fixes the tau-domain to [0, kappa] regardless of the
// concentration shape, so this solve is independent of the base state.
struct RadiativeBaseState {
    Eigen::VectorXd tau;
    Eigen::VectorXd G;
    Eigen::VectorXd q;
    double kappa = 0.0;
    double residual = 0.0;
    int iterations = 0;  // 0 for the direct solve

    // Cubic interpolation of the grid profiles at arbitrary tau (clamped
    // to [0, kappa]).
    double G_at(double t) const;
    double q_at(double t) const;
};

// Collocation matrices of the three kernel integral operators
// f -> int_0^kappa K(tau_i, t) f(t) dt with the singular/kinked diagonal
// handled by subtraction of the local constant and linear parts (closed
// forms from special.hpp) and composite Simpson on the smooth remainder.
struct RadiativeKernels {
    Eigen::MatrixXd e1;      // K = E1(|tau - t|)
    Eigen::MatrixXd e2sgn;   // K = sgn(tau - t) E2(|tau - t|)
    Eigen::MatrixXd e3;      // K = E3(|tau - t|)
};

RadiativeKernels assemble_radiative_kernels(const Eigen::VectorXd& tau,
                                            double kappa);

// Dense direct solve of the coupled Fredholm system (the default path).
RadiativeBaseState solve_radiative_base(const Params& p);

// Picard (source) iteration on the same discretization; cross-check of
// the direct solve. Converges geometrically for albedo < 1.
RadiativeBaseState solve_radiative_base_picard(const Params& p, double tol = 1e-12,
                                               int max_iter = 400);

// Max absolute defect of the two discrete equations under the module's
// quadrature; 0 for an exact discrete solution.
double radiative_residual(const RadiativeBaseState& state, const Params& p);

}  // namespace biostab
