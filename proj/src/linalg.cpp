#include "biostab/linalg.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

extern "C" {
void dggev_(const char* jobvl, const char* jobvr, const int* n, double* a,
            const int* lda, double* b, const int* ldb, double* alphar,
            double* alphai, double* beta, double* vl, const int* ldvl, double* vr,
            const int* ldvr, double* work, const int* lwork, int* info);
}

namespace biostab {

GeneralizedEigen generalized_eigen(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                   bool with_vectors)
{
    const int n = static_cast<int>(A.rows());
    Eigen::MatrixXd a = A, b = B;  // dggev overwrites
    Eigen::VectorXd alphar(n), alphai(n), beta(n);
    Eigen::MatrixXd vr(with_vectors ? n : 1, with_vectors ? n : 1);

    const char jobvl = 'N';
    const char jobvr = with_vectors ? 'V' : 'N';
    const int ldvl = 1, ldvr = with_vectors ? n : 1;
    int info = 0;
    int lwork = -1;
    double wk_query = 0.0;
    dggev_(&jobvl, &jobvr, &n, a.data(), &n, b.data(), &n, alphar.data(),
           alphai.data(), beta.data(), nullptr, &ldvl, vr.data(), &ldvr, &wk_query,
           &lwork, &info);
    lwork = static_cast<int>(wk_query);
    std::vector<double> work(lwork);
    dggev_(&jobvl, &jobvr, &n, a.data(), &n, b.data(), &n, alphar.data(),
           alphai.data(), beta.data(), nullptr, &ldvl, vr.data(), &ldvr, work.data(),
           &lwork, &info);
    if (info != 0)
        throw std::runtime_error("dggev failed with info = " + std::to_string(info));

    GeneralizedEigen out;
    out.values.resize(n);
    out.finite.assign(n, true);
    if (with_vectors) out.vectors.resize(n, n);

    const double beta_floor = 1e-280;
    for (int j = 0; j < n; ++j) {
        if (std::abs(beta[j]) < beta_floor ||
            !std::isfinite(alphar[j]) || !std::isfinite(alphai[j])) {
            out.finite[j] = false;
            out.values[j] = std::complex<double>(
                std::numeric_limits<double>::infinity(), 0.0);
        } else {
            out.values[j] = std::complex<double>(alphar[j], alphai[j]) / beta[j];
        }
    }
    if (with_vectors) {
        for (int j = 0; j < n; ++j) {
            if (j + 1 < n && alphai[j] > 0.0) {
                // complex conjugate pair stored as two real columns
                out.vectors.col(j) = vr.col(j) + std::complex<double>(0, 1) * vr.col(j + 1);
                out.vectors.col(j + 1) =
                    vr.col(j) - std::complex<double>(0, 1) * vr.col(j + 1);
                ++j;
            } else {
                out.vectors.col(j) = vr.col(j).cast<std::complex<double>>();
            }
        }
    }
    return out;
}

std::vector<RitzPair> arnoldi_eigs(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& op, int n,
    int krylov_dim)
{
    const int m = std::min(krylov_dim, n);
    Eigen::MatrixXd V(n, m + 1);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(m + 1, m);

    // deterministic, structureless start vector
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = std::sin(0.7 * i + 0.3) + 0.05 / (i + 1.0);
    V.col(0) = v0 / v0.norm();

    int steps = m;
    for (int j = 0; j < m; ++j) {
        Eigen::VectorXd w = op(V.col(j));
        // modified Gram-Schmidt with one refinement pass
        for (int pass = 0; pass < 2; ++pass) {
            for (int i = 0; i <= j; ++i) {
                const double hij = V.col(i).dot(w);
                w -= hij * V.col(i);
                H(i, j) += hij;
            }
        }
        const double hnext = w.norm();
        H(j + 1, j) = hnext;
        if (hnext < 1e-13) {
            steps = j + 1;
            break;
        }
        V.col(j + 1) = w / hnext;
    }

    const Eigen::MatrixXd Hm = H.topLeftCorner(steps, steps);
    Eigen::EigenSolver<Eigen::MatrixXd> es(Hm);
    const double hlast = H(steps, steps - 1);

    std::vector<RitzPair> out;
    out.reserve(steps);
    for (int j = 0; j < steps; ++j) {
        const std::complex<double> theta = es.eigenvalues()[j];
        const double ylast = std::abs(es.eigenvectors()(steps - 1, j));
        const double res = std::abs(hlast) * ylast;
        out.push_back({theta, res / std::max(std::abs(theta), 1e-300)});
    }
    return out;
}

}  // namespace biostab
