#include "biostab/base_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "biostab/fd.hpp"

namespace biostab {

namespace {

// State carried by the shooting integrator: concentration, optical depth,
// and the running mass integral int_0^z n dz'.
struct Ode {
    const Params& p;
    const TaxisFunction& taxis;
    const RadiativeBaseState& rad;

    void rhs(double /*z*/, const double y[3], double dy[3]) const
    {
        const double n = y[0];
        const double G = rad.G_at(y[1]);
        dy[0] = p.swim_speed * taxis.value(G) * n;
        dy[1] = -p.extinction * n;
        dy[2] = n;
    }
};

// Dormand-Prince 5(4) pair with adaptive step, integrating y' = f(z, y)
// from z0 to z1. Tolerances are tight; the system is 3-dimensional and
// cheap so accuracy is bought outright.
template <typename RHS>
void integrate_dopri(const RHS& f, double z0, double z1, double y[3],
                     double rtol = 1e-12, double atol = 1e-13)
{
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    double z = z0;
    double h = (z1 - z0) * 0.1;
    double k1[3], k2[3], k3[3], k4[3], k5[3], k6[3], k7[3], yt[3], ynew[3];
    f.rhs(z, y, k1);

    int steps = 0;
    while (z < z1) {
        if (++steps > 200000)
            throw std::runtime_error("base state integrator: step limit exceeded");
        h = std::min(h, z1 - z);

        for (int i = 0; i < 3; ++i) yt[i] = y[i] + h * a21 * k1[i];
        f.rhs(z + c2 * h, yt, k2);
        for (int i = 0; i < 3; ++i) yt[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        f.rhs(z + c3 * h, yt, k3);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
        f.rhs(z + c4 * h, yt, k4);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
        f.rhs(z + c5 * h, yt, k5);
        for (int i = 0; i < 3; ++i)
            yt[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                                a64 * k4[i] + a65 * k5[i]);
        f.rhs(z + h, yt, k6);
        for (int i = 0; i < 3; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] +
                                  b5 * k5[i] + b6 * k6[i]);
        f.rhs(z + h, ynew, k7);

        double err = 0.0;
        for (int i = 0; i < 3; ++i) {
            const double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                   e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            const double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            err = std::max(err, std::abs(ei) / sc);
        }

        if (err <= 1.0) {
            z += h;
            for (int i = 0; i < 3; ++i) {
                y[i] = ynew[i];
                k1[i] = k7[i];  // FSAL
            }
        }
        const double fac = std::clamp(0.9 * std::pow(std::max(err, 1e-16), -0.2),
                                      0.2, 5.0);
        h *= fac;
        if (h < 1e-15) throw std::runtime_error("base state integrator: step underflow");
    }
}

// Integrates from z = 0 with tau(0) = kappa and returns tau(1); optionally
// records node values of (n, tau) on the grid.
double shoot(const Ode& ode, const Params& p, double n0, Eigen::VectorXd* n_out,
             Eigen::VectorXd* tau_out, double* mass_out)
{
    const int nz = p.nz;
    double y[3] = {n0, p.extinction, 0.0};
    if (n_out) {
        (*n_out)[0] = y[0];
        (*tau_out)[0] = y[1];
    }
    for (int i = 0; i + 1 < nz; ++i) {
        const double z0 = static_cast<double>(i) / (nz - 1);
        const double z1 = static_cast<double>(i + 1) / (nz - 1);
        integrate_dopri(ode, z0, z1, y);
        if (n_out) {
            (*n_out)[i + 1] = y[0];
            (*tau_out)[i + 1] = y[1];
        }
    }
    if (mass_out) *mass_out = y[2];
    return y[1];
}

// Uppermost crossing of G_s = G_c plus the number of crossings found.
std::optional<double> find_sublayer(const BaseState& base, double Gc, int& crossings)
{
    const int nz = static_cast<int>(base.z.size());
    const double h = base.z[1] - base.z[0];

    auto G_of_z = [&](double z) {
        return interp_cubic_uniform(base.G, 0.0, h, std::clamp(z, 0.0, 1.0));
    };

    std::optional<double> uppermost;
    crossings = 0;
    for (int i = nz - 2; i >= 0; --i) {
        const double a = base.G[i] - Gc;
        const double b = base.G[i + 1] - Gc;
        if (a == 0.0 || a * b < 0.0) {
            ++crossings;
            if (!uppermost) {
                double lo = base.z[i], hi = base.z[i + 1];
                double flo = a;
                for (int it = 0; it < 80; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = G_of_z(mid) - Gc;
                    if ((fm >= 0.0) == (flo >= 0.0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                uppermost = 0.5 * (lo + hi);
            }
        }
    }
    return uppermost;
}

void fill_radiation_fields(BaseState& st, const Params& p, const TaxisFunction& taxis,
                           const RadiativeBaseState& rad)
{
    const int nz = static_cast<int>(st.z.size());
    st.G.resize(nz);
    st.q.resize(nz);
    st.G_coll.resize(nz);
    st.G_diff.resize(nz);
    st.M.resize(nz);
    st.dMdG.resize(nz);
    st.Dn.resize(nz);
    for (int i = 0; i < nz; ++i) {
        const double tau = st.tau[i];
        st.G[i] = rad.G_at(tau);
        st.q[i] = rad.q_at(tau);
        st.G_coll[i] = p.source_intensity * std::exp(-tau);
        st.G_diff[i] = st.G[i] - st.G_coll[i];
        const auto [M, dM] = taxis(st.G[i]);
        st.M[i] = M;
        st.dMdG[i] = dM;
        st.Dn[i] = p.swim_speed * M * st.n[i];
    }
    int crossings = 0;
    st.sublayer = find_sublayer(st, p.critical_intensity, crossings);
    st.multiple_crossings = crossings > 1;
}

}  // namespace

BaseState solve_base_state(const Params& p, const TaxisFunction& taxis,
                           const RadiativeBaseState& rad)
{
    validate_or_throw(p);
    validate_taxis_or_throw(taxis, p.critical_intensity);
    if (rad.tau.size() < 4 || std::abs(rad.kappa - p.extinction) > 1e-13)
        throw std::invalid_argument("solve_base_state: radiative state mismatch");

    const Ode ode{p, taxis, rad};

    if (p.swim_speed == 0.0) {
        // Uniform suspension; no shooting needed.
        BaseState st;
        const int nz = p.nz;
        st.z = Eigen::VectorXd::LinSpaced(nz, 0.0, 1.0);
        st.n = Eigen::VectorXd::Ones(nz);
        st.tau = p.extinction * (Eigen::VectorXd::Ones(nz) - st.z);
        st.n_bottom = 1.0;
        st.conservation = 0.0;
        st.tau_defect = 0.0;
        fill_radiation_fields(st, p, taxis, rad);
        return st;
    }

    // Bracket tau(1) = 0 in x = log n(0); tau(1) decreases with n(0).
    auto f = [&](double x) {
        return shoot(ode, p, std::exp(x), nullptr, nullptr, nullptr);
    };
    double x_lo = std::log(1e-12), x_hi = std::log(4.0);
    double f_lo = f(x_lo), f_hi = f(x_hi);
    int expand = 0;
    while (f_hi > 0.0) {
        x_hi += std::log(16.0);
        f_hi = f(x_hi);
        if (++expand > 16)
            throw std::runtime_error(
                "solve_base_state: shooting bracket failure, tau(1) = " +
                std::to_string(f_hi) + " at n(0) = " + std::to_string(std::exp(x_hi)));
    }
    while (f_lo < 0.0) {
        x_lo -= std::log(16.0);
        f_lo = f(x_lo);
        if (++expand > 32)
            throw std::runtime_error("solve_base_state: shooting bracket failure at small n(0)");
    }

    // Illinois secant within the bracket.
    double x = x_hi, fx = f_hi;
    for (int it = 0; it < 200 && std::abs(fx) > 1e-13; ++it) {
        x = (x_lo * f_hi - x_hi * f_lo) / (f_hi - f_lo);
        x = std::clamp(x, std::min(x_lo, x_hi), std::max(x_lo, x_hi));
        fx = f(x);
        if (fx > 0.0) {
            if (f_lo > 0.0) f_hi *= 0.5;
            x_lo = x;
            f_lo = fx;
        } else {
            if (f_hi < 0.0) f_lo *= 0.5;
            x_hi = x;
            f_hi = fx;
        }
        if (std::abs(x_hi - x_lo) < 1e-15) break;
    }

    BaseState st;
    st.z = Eigen::VectorXd::LinSpaced(p.nz, 0.0, 1.0);
    st.n.resize(p.nz);
    st.tau.resize(p.nz);
    double mass = 0.0;
    const double tau_end = shoot(ode, p, std::exp(x), &st.n, &st.tau, &mass);
    st.n_bottom = std::exp(x);
    st.conservation = mass - 1.0;
    st.tau_defect = tau_end;  // tau(0) = kappa held exactly, defect shows at z = 1
    if (std::abs(st.conservation) > 1e-9 || std::abs(st.tau_defect) > 1e-9)
        throw std::runtime_error("solve_base_state: shooting did not converge, "
                                 "mass defect = " + std::to_string(st.conservation));

    fill_radiation_fields(st, p, taxis, rad);
    return st;
}

std::optional<double> sublayer_position(const BaseState& base, const Params& p)
{
    int crossings = 0;
    return find_sublayer(base, p.critical_intensity, crossings);
}

}  // namespace biostab
