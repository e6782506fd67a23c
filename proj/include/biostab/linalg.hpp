#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace biostab {

// Generalized eigenproblem A x = lambda B x for a real pencil, solved by
// the LAPACK QZ algorithm (dggev). Infinite eigenvalues (|beta| ~ 0) are
// reported as such via the finite flag.
struct GeneralizedEigen {
    Eigen::VectorXcd values;
    std::vector<bool> finite;
    Eigen::MatrixXcd vectors;  // empty unless requested
};

GeneralizedEigen generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   bool with_vectors);

// Ritz approximations from a real Arnoldi iteration on a caller-supplied
// operator (typically a shift-inverted pencil). Values are eigenvalues of
// the operator itself; the caller maps them back through its transform.
struct RitzPair {
    std::complex<double> value;
    double rel_residual;
};

std::vector<RitzPair> arnoldi_eigs(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, int n,
    int krylov_dim);

}  // namespace biostab
