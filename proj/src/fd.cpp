#include "biostab/fd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biostab {

Eigen::VectorXd fornberg_weights(double x0, const Eigen::VectorXd& x, int m)
{
    const int nd = static_cast<int>(x.size()) - 1;
    if (nd < m) throw std::invalid_argument("fornberg_weights: stencil too small");

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(nd + 1, m + 1);
    double c1 = 1.0;
    double c4 = x[0] - x0;
    c(0, 0) = 1.0;
    for (int i = 1; i <= nd; ++i) {
        const int mn = std::min(i, m);
        double c2 = 1.0;
        double c5 = c4;
        c4 = x[i] - x0;
        for (int j = 0; j < i; ++j) {
            const double c3 = x[i] - x[j];
            c2 *= c3;
            if (j == i - 1) {
                for (int k = mn; k >= 1; --k)
                    c(i, k) = c1 * (k * c(i - 1, k - 1) - c5 * c(i - 1, k)) / c2;
                c(i, 0) = -c1 * c5 * c(i - 1, 0) / c2;
            }
            for (int k = mn; k >= 1; --k)
                c(j, k) = (c4 * c(j, k) - k * c(j, k - 1)) / c3;
            c(j, 0) = c4 * c(j, 0) / c3;
        }
        c1 = c2;
    }
    return c.col(m);
}

Eigen::MatrixXd diff_matrix(int n, double h, int m)
{
    if (m < 1 || m > 4) throw std::invalid_argument("diff_matrix: order must be 1..4");
    const int w_int = (m <= 2) ? 5 : 7;
    const int w_bnd = m + 4;
    if (n < w_bnd) throw std::invalid_argument("diff_matrix: grid too small");

    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        int w = w_int;
        int lo = i - (w - 1) / 2;
        if (lo < 0 || lo + w > n) {
            w = w_bnd;
            lo = std::clamp(i - (w - 1) / 2, 0, n - w);
        }
        Eigen::VectorXd x(w);
        for (int j = 0; j < w; ++j) x[j] = (lo + j - i) * h;
        const Eigen::VectorXd wts = fornberg_weights(0.0, x, m);
        for (int j = 0; j < w; ++j) D(i, lo + j) = wts[j];
    }
    return D;
}

Eigen::VectorXd simpson_weights(int n, double h)
{
    if (n < 3 || n % 2 == 0)
        throw std::invalid_argument("simpson_weights: n must be odd and >= 3");
    Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
    for (int i = 0; i + 2 < n; i += 2) {
        w[i] += h / 3.0;
        w[i + 1] += 4.0 * h / 3.0;
        w[i + 2] += h / 3.0;
    }
    return w;
}

double interp_cubic_uniform(const Eigen::VectorXd& values, double x0, double h,
                            double x)
{
    const int n = static_cast<int>(values.size());
    if (n < 4) throw std::invalid_argument("interp_cubic_uniform: need >= 4 nodes");
    double s = (x - x0) / h;
    int i = static_cast<int>(std::floor(s));
    int lo = std::clamp(i - 1, 0, n - 4);
    const double t = s - lo;  // position in units of h relative to node lo
    // Lagrange basis on offsets {0,1,2,3}
    const double t0 = t, t1 = t - 1.0, t2 = t - 2.0, t3 = t - 3.0;
    const double l0 = -t1 * t2 * t3 / 6.0;
    const double l1 = t0 * t2 * t3 / 2.0;
    const double l2 = -t0 * t1 * t3 / 2.0;
    const double l3 = t0 * t1 * t2 / 6.0;
    return l0 * values[lo] + l1 * values[lo + 1] + l2 * values[lo + 2] +
           l3 * values[lo + 3];
}

}  // namespace biostab
