#include "biostab/radiative_base.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biostab/fd.hpp"
#include "biostab/special.hpp"

namespace biostab {

namespace {

enum class Kernel { E1, E2Sgn, E3 };

double kernel_value(Kernel k, double dtau)
{
    const double a = std::abs(dtau);
    switch (k) {
        case Kernel::E1:
            return expint(1, a);
        case Kernel::E2Sgn:
            // sgn(0) = 0 on the diagonal
            return (dtau == 0.0) ? 0.0 : std::copysign(expint(2, a), dtau);
        case Kernel::E3:
            return expint(3, a);
    }
    return 0.0;
}

void kernel_row_closed_form(Kernel k, double tau, double kappa, double& c0,
                            double& c1)
{
    switch (k) {
        case Kernel::E1:
            c0 = e1_row_integral(tau, kappa);
            c1 = e1_row_moment(tau, kappa);
            return;
        case Kernel::E2Sgn:
            c0 = e2sgn_row_integral(tau, kappa);
            c1 = e2sgn_row_moment(tau, kappa);
            return;
        case Kernel::E3:
            c0 = e3_row_integral(tau, kappa);
            c1 = e3_row_moment(tau, kappa);
            return;
    }
}

// Nystrom matrix of f -> int K f with the diagonal singularity subtracted
// to linear order:
//   I_i = f_i C0_i + f'_i C1_i + sum_j w_j K_ij (f_j - f_i - f'_i (t_j - t_i))
// The derivative uses the fourth-order grid matrix, so everything stays a
// dense linear map of the samples.
Eigen::MatrixXd kernel_matrix(Kernel k, const Eigen::VectorXd& tau, double kappa,
                              const Eigen::VectorXd& w, const Eigen::MatrixXd& D1)
{
    const int n = static_cast<int>(tau.size());
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        double wsum = 0.0, msum = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            const double kij = w[j] * kernel_value(k, tau[i] - tau[j]);
            M(i, j) += kij;
            wsum += kij;
            msum += kij * (tau[j] - tau[i]);
        }
        double c0 = 0.0, c1 = 0.0;
        kernel_row_closed_form(k, tau[i], kappa, c0, c1);
        M(i, i) += c0 - wsum;
        M.row(i) += (c1 - msum) * D1.row(i);
    }
    return M;
}

struct System {
    Eigen::VectorXd tau;
    Eigen::VectorXd rhs;       // L_t exp(-tau), stacked twice
    Eigen::MatrixXd coupling;  // (omega/2) * [[E1, A E2sgn], [E2sgn, A E3]]
};

System build_system(const Params& p)
{
    const int n = p.ntau;
    System sys;
    sys.tau.resize(n);
    const double h = p.extinction / (n - 1);
    for (int i = 0; i < n; ++i) sys.tau[i] = i * h;

    const Eigen::MatrixXd D1 = diff_matrix(n, h, 1);
    const Eigen::VectorXd w = simpson_weights(n, h);

    const Eigen::MatrixXd K1 = kernel_matrix(Kernel::E1, sys.tau, p.extinction, w, D1);
    const Eigen::MatrixXd K2 = kernel_matrix(Kernel::E2Sgn, sys.tau, p.extinction, w, D1);
    const Eigen::MatrixXd K3 = kernel_matrix(Kernel::E3, sys.tau, p.extinction, w, D1);

    const double c = 0.5 * p.albedo;
    sys.coupling.resize(2 * n, 2 * n);
    sys.coupling.topLeftCorner(n, n) = c * K1;
    sys.coupling.topRightCorner(n, n) = c * p.aniso * K2;
    sys.coupling.bottomLeftCorner(n, n) = c * K2;
    sys.coupling.bottomRightCorner(n, n) = c * p.aniso * K3;

    sys.rhs.resize(2 * n);
    for (int i = 0; i < n; ++i) {
        const double e = p.source_intensity * std::exp(-sys.tau[i]);
        sys.rhs[i] = e;
        sys.rhs[n + i] = e;
    }
    return sys;
}

RadiativeBaseState pack_state(const Params& p, const System& sys,
                              const Eigen::VectorXd& u, int iterations)
{
    const int n = p.ntau;
    RadiativeBaseState st;
    st.tau = sys.tau;
    st.G = u.head(n);
    st.q = u.tail(n);
    st.kappa = p.extinction;
    st.iterations = iterations;
    st.residual = (u - sys.rhs - sys.coupling * u).cwiseAbs().maxCoeff();
    return st;
}

}  // namespace

RadiativeKernels assemble_radiative_kernels(const Eigen::VectorXd& tau, double kappa)
{
    const int n = static_cast<int>(tau.size());
    const double h = tau[1] - tau[0];
    const Eigen::MatrixXd D1 = diff_matrix(n, h, 1);
    const Eigen::VectorXd w = simpson_weights(n, h);
    return {kernel_matrix(Kernel::E1, tau, kappa, w, D1),
            kernel_matrix(Kernel::E2Sgn, tau, kappa, w, D1),
            kernel_matrix(Kernel::E3, tau, kappa, w, D1)};
}

RadiativeBaseState solve_radiative_base(const Params& p)
{
    validate_or_throw(p);
    const System sys = build_system(p);
    const int n2 = 2 * p.ntau;
    const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n2, n2) - sys.coupling;
    const Eigen::VectorXd u = Eigen::PartialPivLU<Eigen::MatrixXd>(A).solve(sys.rhs);
    return pack_state(p, sys, u, 0);
}

RadiativeBaseState solve_radiative_base_picard(const Params& p, double tol,
                                               int max_iter)
{
    validate_or_throw(p);
    const System sys = build_system(p);
    Eigen::VectorXd u = sys.rhs;
    for (int it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd next = sys.rhs + sys.coupling * u;
        const double diff = (next - u).cwiseAbs().maxCoeff();
        u = std::move(next);
        if (diff < tol) return pack_state(p, sys, u, it);
    }
    RadiativeBaseState st = pack_state(p, sys, u, max_iter);
    throw std::runtime_error(
        "solve_radiative_base_picard: no convergence after " +
        std::to_string(max_iter) + " iterations, residual = " +
        std::to_string(st.residual));
}

double radiative_residual(const RadiativeBaseState& state, const Params& p)
{
    if (state.tau.size() != p.ntau || std::abs(state.kappa - p.extinction) > 1e-14)
        throw std::invalid_argument("radiative_residual: grid mismatch");
    const System sys = build_system(p);
    Eigen::VectorXd u(2 * p.ntau);
    u << state.G, state.q;
    return (u - sys.rhs - sys.coupling * u).cwiseAbs().maxCoeff();
}

double RadiativeBaseState::G_at(double t) const
{
    const double tc = std::clamp(t, 0.0, kappa);
    return interp_cubic_uniform(G, 0.0, tau[1] - tau[0], tc);
}

double RadiativeBaseState::q_at(double t) const
{
    const double tc = std::clamp(t, 0.0, kappa);
    return interp_cubic_uniform(q, 0.0, tau[1] - tau[0], tc);
}

}  // namespace biostab
