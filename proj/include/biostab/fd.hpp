#pragma once

#include <Eigen/Dense>

namespace biostab {

// Fornberg weights: derivative of order m at x0 from the nodes x.
// Achieved order of accuracy is x.size() - m (one more on symmetric stencils).
Eigen::VectorXd fornberg_weights(double x0, const Eigen::VectorXd& x, int m);

// Dense differentiation matrix of order-m derivative on a uniform grid of
// n nodes with spacing h. Fourth-order accurate: centered stencils in the
// interior (5 points for D1/D2, 7 for D3/D4), one-sided closures of m+4
// points at the boundaries.
Eigen::MatrixXd diff_matrix(int n, double h, int m);

// Composite Simpson weights on a uniform grid (n odd).
Eigen::VectorXd simpson_weights(int n, double h);

// Local 4-point Lagrange (cubic) interpolation on a uniform grid.
double interp_cubic_uniform(const Eigen::VectorXd& values, double x0, double h,
                            double x);

}  // namespace biostab
