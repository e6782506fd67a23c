#pragma once

#include <optional>

#include <Eigen/Dense>

#include "biostab/params.hpp"
#include "biostab/radiative_base.hpp"
#include "biostab/taxis.hpp"

namespace biostab {

// Equilibrium profiles on the shared uniform z-grid. Immutable after
// construction and shareable across solves.
struct BaseState {
    Eigen::VectorXd z;
    Eigen::VectorXd n;        // cell concentration n_s, int_0^1 n dz = 1
    Eigen::VectorXd tau;      // optical depth, tau(1) = 0, tau(0) = kappa
    Eigen::VectorXd G;        // total intensity G_s(tau(z))
    Eigen::VectorXd q;        // radiative flux magnitude q_s(tau(z))
    Eigen::VectorXd G_coll;   // collimated part L_t exp(-tau)
    Eigen::VectorXd G_diff;   // diffuse part G - G_coll
    Eigen::VectorXd M;        // taxis response M(G_s)
    Eigen::VectorXd dMdG;     // taxis derivative at G_s
    Eigen::VectorXd Dn;       // dn/dz = V_c M n (stored from the ODE relation)

    double n_bottom = 0.0;       // shooting unknown n_s(0)
    double conservation = 0.0;   // int n dz - 1 on the solver's quadrature
    double tau_defect = 0.0;     // tau(0) - kappa

    std::optional<double> sublayer;  // uppermost z with G_s(z) = G_c
    bool multiple_crossings = false;

    double z_spacing() const { return z[1] - z[0]; }
};

// Shooting solve of dn/dz = V_c M(G_s(tau)) n, dtau/dz = -kappa n upward
// from z = 0 with unknown n(0); bracketed secant on n(0) until the
// normalization int n = 1 (equivalently tau(1) = 0) holds to 1e-10.
BaseState solve_base_state(const Params& p, const TaxisFunction& taxis,
                           const RadiativeBaseState& rad);

// Uppermost z where G_s(z) = G_c, by sign-change bracketing on the grid
// plus bisection on the interpolated profile. Empty when G_s - G_c does
// not change sign on [0, 1].
std::optional<double> sublayer_position(const BaseState& base, const Params& p);

}  // namespace biostab
