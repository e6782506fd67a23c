#pragma once

#include <vector>

namespace biostab {

// Exponential integral E_n(x) = int_1^inf exp(-x t) / t^n dt.
// Power series for x < 1, modified Lentz continued fraction for x >= 1
// (EXPINT_SWITCH below). Absolute error < 1e-12 over n in [1,8].
// n = 1 requires x > 0 (logarithmic singularity at the origin).
double expint(int n, double x);

// Switch point between the series and continued-fraction regimes.
inline constexpr double EXPINT_SWITCH = 1.0;

// int_0^kappa E1(|tau - t|) dt = 2 - E2(tau) - E2(kappa - tau).
// Exact integral of the log-singular kernel row against a constant.
double e1_row_integral(double tau, double kappa);

// First moments of the radiative kernels against (t - tau), used to
// integrate the singular rows exactly against the local linear part:
//   e1_row_moment   : int_0^kappa (t - tau) E1(|tau - t|) dt
//   e2sgn_row_integral: int_0^kappa sgn(tau - t) E2(|tau - t|) dt
//   e2sgn_row_moment : int_0^kappa sgn(tau - t) (t - tau) E2(|tau - t|) dt
//   e3_row_integral  : int_0^kappa E3(|tau - t|) dt
//   e3_row_moment    : int_0^kappa (t - tau) E3(|tau - t|) dt
double e1_row_moment(double tau, double kappa);
double e2sgn_row_integral(double tau, double kappa);
double e2sgn_row_moment(double tau, double kappa);
double e3_row_integral(double tau, double kappa);
double e3_row_moment(double tau, double kappa);

// Gauss-Legendre nodes and weights on [a, b].
void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights);

// Angular quadrature over the unit sphere: Gauss-Legendre in the polar
// cosine on each hemisphere, uniform (periodic trapezoid) in azimuth.
// nphi must be even so the node set is closed under phi -> pi - phi and
// phi -> 2pi - phi; the solvers rely on those pairings.
struct AngularQuadrature {
    int nmu = 32;   // polar nodes per hemisphere
    int nphi = 24;  // azimuthal nodes

    std::vector<double> mu;        // polar cosines, nmu entries in (0,1)
    std::vector<double> wmu;       // Gauss-Legendre weights on (0,1)
    std::vector<double> phi;       // 2*pi*j/nphi
    double wphi = 0.0;             // uniform azimuthal weight 2*pi/nphi

    // Flattened direction list: nu = +-mu[i], xi = sin(theta) cos(phi),
    // eta = sin(theta) sin(phi), weight = wmu * wphi.
    struct Direction {
        double nu, xi, eta, weight;
    };
    std::vector<Direction> directions;

    AngularQuadrature(int nmu_, int nphi_);

    double solid_angle_sum() const;   // should be 4*pi
    double nu_moment(int power) const;
};

}  // namespace biostab
