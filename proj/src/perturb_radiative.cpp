#include "biostab/perturb_radiative.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "biostab/fd.hpp"

namespace biostab {

namespace {

constexpr double FOUR_PI = 4.0 * M_PI;

// 5-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 5> GL5_X = {
    0.046910077030668004, 0.230765344947158450, 0.5,
    0.769234655052841550, 0.953089922969331996};
constexpr std::array<double, 5> GL5_W = {
    0.118463442528094544, 0.239314335249683234, 0.284444444444444444,
    0.239314335249683234, 0.118463442528094544};

// Coefficients of the four cubic Lagrange basis polynomials through the
// abscissae u[0..3]; row m holds the monomial coefficients of l_m.
std::array<std::array<double, 4>, 4> lagrange_coeffs(const std::array<double, 4>& u)
{
    std::array<std::array<double, 4>, 4> B{};
    for (int m = 0; m < 4; ++m) {
        std::array<double, 4> poly = {1.0, 0.0, 0.0, 0.0};
        double denom = 1.0;
        int deg = 0;
        for (int l = 0; l < 4; ++l) {
            if (l == m) continue;
            denom *= u[m] - u[l];
            // poly *= (x - u[l])
            for (int j = deg + 1; j >= 1; --j) poly[j] = poly[j - 1] - u[l] * poly[j];
            poly[0] *= -u[l];
            ++deg;
        }
        for (int j = 0; j < 4; ++j) B[m][j] = poly[j] / denom;
    }
    return B;
}

double poly_eval(const double* c, int n, double u)
{
    double v = c[n - 1];
    for (int j = n - 2; j >= 0; --j) v = v * u + c[j];
    return v;
}

complexd poly_eval(const complexd* c, int n, double u)
{
    complexd v = c[n - 1];
    for (int j = n - 2; j >= 0; --j) v = v * u + c[j];
    return v;
}

}  // namespace

// Geometry of one march step: the 4-node source window, the cubic Lagrange
// basis in the march parameter u in [0,1], and the cubic model of n_s.
struct PerturbationContext::StepGeometry {
    std::array<int, 4> win;
    std::array<std::array<double, 4>, 4> basis;  // l_m(u) coefficients
    std::array<double, 4> cn;                    // n_s(z(u)) coefficients
    int start = 0, target = 0;
};

// Propagator and source-quadrature weights of one step for one direction.
struct PerturbationContext::StepData {
    complexd trans;
    std::array<complexd, 4> w;
    const StepGeometry* geom = nullptr;
};

PerturbationContext::PerturbationContext(const BaseState& base, const Params& params,
                                         const AngularQuadrature& quad)
    : base_(base), params_(params), quad_(quad)
{
    const int nz = static_cast<int>(base.z.size());
    const int nsteps = nz - 1;
    geom_up_.resize(nsteps);
    geom_down_.resize(nsteps);

    for (int s = 0; s < nsteps; ++s) {
        const int lo = std::clamp(s - 1, 0, nz - 4);
        for (int orient = 0; orient < 2; ++orient) {
            StepGeometry& g = (orient == 0) ? geom_up_[s] : geom_down_[s];
            std::array<double, 4> u{};
            for (int m = 0; m < 4; ++m) {
                g.win[m] = lo + m;
                u[m] = (orient == 0) ? static_cast<double>(lo + m - s)
                                     : static_cast<double>(s + 1 - (lo + m));
            }
            g.basis = lagrange_coeffs(u);
            g.cn = {0.0, 0.0, 0.0, 0.0};
            for (int m = 0; m < 4; ++m)
                for (int j = 0; j < 4; ++j) g.cn[j] += g.basis[m][j] * base.n[g.win[m]];
            g.start = (orient == 0) ? s : s + 1;
            g.target = (orient == 0) ? s + 1 : s;
        }
    }

    // Base diffuse intensity per polar direction, marched with the same
    // stepping machinery (phase-free).
    const int nmu2 = 2 * quad.nmu;
    base_diffuse_ = Eigen::MatrixXd::Zero(nz, nmu2);
    const double c0 = params.albedo * params.extinction / FOUR_PI;
    std::vector<StepData> steps;
    Eigen::VectorXcd src(nz), psi(nz);
    for (int pi = 0; pi < nmu2; ++pi) {
        const double nu = (pi < quad.nmu) ? quad.mu[pi] : -quad.mu[pi - quad.nmu];
        build_step_data(nu, 0.0, 0.0, steps);
        for (int i = 0; i < nz; ++i)
            src[i] = c0 * base.n[i] * (base.G[i] - params.aniso * nu * base.q[i]);
        march(steps, nu, src, psi);
        base_diffuse_.col(pi) = psi.real();
    }
}

void PerturbationContext::build_step_data(double nu, double xi, double k,
                                          std::vector<StepData>& out) const
{
    const int nsteps = static_cast<int>(geom_up_.size());
    const double h = base_.z_spacing();
    const double h_dir = (nu > 0.0) ? h : -h;
    const double fac = h_dir / nu;  // positive along the propagation path
    const complexd phase(0.0, fac * k * xi);
    const double ext = fac * params_.extinction;

    out.resize(nsteps);
    for (int idx = 0; idx < nsteps; ++idx) {
        const int s = (nu > 0.0) ? idx : nsteps - 1 - idx;
        const StepGeometry& g = (nu > 0.0) ? geom_up_[s] : geom_down_[s];
        StepData& d = out[idx];
        d.geom = &g;

        // rho(u) = phase + ext * n_s(z(u)); R(u) = int_0^u rho
        complexd crho[4];
        for (int j = 0; j < 4; ++j)
            crho[j] = (j == 0) ? phase + ext * g.cn[0] : complexd(ext * g.cn[j], 0.0);
        complexd cR[5] = {0.0, crho[0], crho[1] / 2.0, crho[2] / 3.0, crho[3] / 4.0};
        const complexd delta = poly_eval(cR, 5, 1.0);

        if (delta.real() > 35.0) {
            // Optically thick step: the carried intensity is extinguished
            // and the source integral reduces to its endpoint expansion
            //   I = s/rho - d/du(s/rho)/rho at u = 1.
            d.trans = 0.0;
            const complexd rho1 = poly_eval(crho, 4, 1.0);
            const complexd drho1 = crho[1] + 2.0 * crho[2] + 3.0 * crho[3];
            for (int m = 0; m < 4; ++m) {
                const double* b = g.basis[m].data();
                const double lm = poly_eval(b, 4, 1.0);
                const double dlm = b[1] + 2.0 * b[2] + 3.0 * b[3];
                d.w[m] = fac * (lm / rho1 - dlm / (rho1 * rho1) +
                                lm * drho1 / (rho1 * rho1 * rho1));
            }
        } else {
            d.trans = std::exp(-delta);
            const int nsub = std::clamp(
                static_cast<int>(std::ceil(std::abs(delta) / 0.7)), 1, 64);
            for (int m = 0; m < 4; ++m) d.w[m] = 0.0;
            const double hsub = 1.0 / nsub;
            for (int sub = 0; sub < nsub; ++sub) {
                const double a = sub * hsub;
                for (int gq = 0; gq < 5; ++gq) {
                    const double t = a + hsub * GL5_X[gq];
                    const complexd E = std::exp(poly_eval(cR, 5, t) - delta);
                    const complexd cw = fac * hsub * GL5_W[gq] * E;
                    for (int m = 0; m < 4; ++m)
                        d.w[m] += cw * poly_eval(g.basis[m].data(), 4, t);
                }
            }
        }
    }
}

void PerturbationContext::march(const std::vector<StepData>& steps, double nu,
                                const Eigen::VectorXcd& source,
                                Eigen::VectorXcd& psi) const
{
    const int nz = static_cast<int>(base_.z.size());
    psi.resize(nz);
    complexd cur = 0.0;  // vanishing inflow at the entry boundary
    psi[(nu > 0.0) ? 0 : nz - 1] = cur;
    for (const StepData& d : steps) {
        complexd s = 0.0;
        for (int m = 0; m < 4; ++m) s += d.w[m] * source[d.geom->win[m]];
        cur = d.trans * cur + s;
        psi[d.geom->target] = cur;
    }
}

Eigen::VectorXcd perturbed_collimated(const BaseState& base, const Params& p,
                                      const Eigen::VectorXcd& theta)
{
    if (theta.size() != base.z.size())
        throw std::invalid_argument("perturbed_collimated: grid mismatch");
    return p.extinction * base.G_coll.cast<complexd>().cwiseProduct(theta);
}

PerturbedRadiation PerturbationContext::solve_diffuse(double k,
                                                      const Eigen::VectorXcd& ntilde,
                                                      const Eigen::VectorXcd& theta,
                                                      double tol, int max_iter) const
{
    const int nz = static_cast<int>(base_.z.size());
    if (ntilde.size() != nz || theta.size() != nz)
        throw std::invalid_argument("solve_perturbed_diffuse: grid mismatch");

    const int nmu = quad_.nmu, nphi = quad_.nphi;
    const int ndir = 2 * nmu * nphi;
    const double scat = params_.albedo * params_.extinction / FOUR_PI;
    const double A = params_.aniso;

    // Per-direction step data, reused across sweeps.
    std::vector<std::vector<StepData>> steps(ndir);
    for (int d = 0; d < ndir; ++d) {
        const auto& dir = quad_.directions[d];
        build_step_data(dir.nu, dir.xi, k, steps[d]);
    }

    PerturbedRadiation out;
    out.k = k;
    out.Gc = perturbed_collimated(base_, params_, theta);
    const Eigen::VectorXcd s_coll = -out.Gc;

    Eigen::VectorXcd gd = Eigen::VectorXcd::Zero(nz);
    Eigen::VectorXcd sd = Eigen::VectorXcd::Zero(nz);
    out.Psi.resize(nz, ndir);

    Eigen::VectorXcd src(nz), psi(nz);
    Eigen::VectorXcd gd_new(nz), sd_new(nz), P(nz), Q(nz);

    for (int it = 1; it <= max_iter; ++it) {
        gd_new.setZero();
        sd_new.setZero();
        P.setZero();
        Q.setZero();
        for (int d = 0; d < ndir; ++d) {
            const auto& dir = quad_.directions[d];
            const int pi = d / nphi;  // polar column in base_diffuse_
            for (int i = 0; i < nz; ++i) {
                const complexd g = out.Gc[i] + gd[i];
                const complexd s = s_coll[i] + sd[i];
                const double gamma = scat * (base_.G[i] - A * dir.nu * base_.q[i]) -
                                     params_.extinction * base_diffuse_(i, pi);
                src[i] = scat * base_.n[i] * (g + A * dir.nu * s) + gamma * ntilde[i];
            }
            march(steps[d], dir.nu, src, psi);
            out.Psi.col(d) = psi;
            gd_new += dir.weight * psi;
            sd_new += (dir.weight * dir.nu) * psi;
            P += (dir.weight * dir.xi) * psi;
            Q += (dir.weight * dir.eta) * psi;
        }
        const double dg = (gd_new - gd).cwiseAbs().maxCoeff();
        const double ds = (sd_new - sd).cwiseAbs().maxCoeff();
        gd.swap(gd_new);
        sd.swap(sd_new);
        out.iterations = it;
        if (dg < tol && ds < tol) {
            out.Gd = gd;
            out.P = P;
            out.Q = Q;
            out.S = s_coll + sd;
            return out;
        }
    }
    throw std::runtime_error(
        "solve_perturbed_diffuse: source iteration did not converge after " +
        std::to_string(max_iter) + " sweeps (albedo too close to 1?)");
}

StabilityProfiles lambda_profiles(const BaseState& base, const Params& p)
{
    const int nz = static_cast<int>(base.z.size());
    const Eigen::MatrixXd D1 = diff_matrix(nz, base.z_spacing(), 1);
    const double kVc = p.extinction * p.swim_speed;

    StabilityProfiles out;
    const Eigen::VectorXd light =
        base.n.cwiseProduct(base.G_coll).cwiseProduct(base.dMdG);
    out.lambda1 = kVc * (D1 * light);
    out.lambda2 =
        2.0 * kVc * light + p.swim_speed * base.dMdG.cwiseProduct(D1 * base.G_diff);
    out.lambda3 = p.swim_speed * base.M;
    return out;
}

RadiationOperators PerturbationContext::response_operators(double k) const
{
    using RowMajor =
        Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const int nz = static_cast<int>(base_.z.size());
    const int nmu = quad_.nmu, nphi = quad_.nphi;
    const double scat = params_.albedo * params_.extinction / FOUR_PI;
    const double A = params_.aniso;

    // Moment-transfer matrices: target node x source node, for the three
    // source slots (total intensity g, total vertical flux s, ntilde) and
    // the three outputs (G moment, S moment, Im P moment).
    RowMajor MGg = RowMajor::Zero(nz, nz), MGs = RowMajor::Zero(nz, nz),
             MGn = RowMajor::Zero(nz, nz), MSg = RowMajor::Zero(nz, nz),
             MSs = RowMajor::Zero(nz, nz), MSn = RowMajor::Zero(nz, nz),
             MPg = RowMajor::Zero(nz, nz), MPs = RowMajor::Zero(nz, nz),
             MPn = RowMajor::Zero(nz, nz);

    // Orbit reduction over the azimuth grid: phi -> pi - phi conjugates the
    // march and flips xi, phi -> 2pi - phi leaves it unchanged (m = 0), so
    // only representatives with xi >= 0 are marched and the accumulation
    // stays in real arithmetic.
    std::vector<int> orbit_rep, orbit_size;
    {
        std::vector<bool> seen(nphi, false);
        for (int j = 0; j < nphi; ++j) {
            if (seen[j]) continue;
            const std::array<int, 4> orbit = {j, (nphi - j) % nphi,
                                              ((nphi / 2 - j) % nphi + nphi) % nphi,
                                              (nphi / 2 + j) % nphi};
            int size = 0;
            for (int o : orbit) {
                if (!seen[o]) {
                    seen[o] = true;
                    ++size;
                }
            }
            orbit_rep.push_back(j);
            orbit_size.push_back(size);
        }
    }

    std::vector<StepData> steps;
    Eigen::VectorXcd row(nz);
    Eigen::VectorXd cg(nz), cs(nz), cn(nz);

    for (int pi = 0; pi < 2 * nmu; ++pi) {
        const double nu = (pi < nmu) ? quad_.mu[pi] : -quad_.mu[pi - nmu];
        const double wmu = (pi < nmu) ? quad_.wmu[pi] : quad_.wmu[pi - nmu];
        for (int i = 0; i < nz; ++i) {
            cg[i] = scat * base_.n[i];
            cs[i] = scat * A * nu * base_.n[i];
            cn[i] = scat * (base_.G[i] - A * nu * base_.q[i]) -
                    params_.extinction * base_diffuse_(i, pi);
        }

        for (size_t r = 0; r < orbit_rep.size(); ++r) {
            const double xi = std::abs(std::cos(quad_.phi[orbit_rep[r]])) *
                              std::sqrt(std::max(0.0, 1.0 - nu * nu));
            const double wdir = wmu * quad_.wphi * orbit_size[r];
            build_step_data(nu, xi, k, steps);

            // Running functional row: psi at the current node as a linear
            // map of the source node samples.
            row.setZero();
            int lo = nz, hi = -1;
            const double wG = wdir, wS = wdir * nu, wP = wdir * xi;
            for (const StepData& d : steps) {
                const complexd t = d.trans;
                if (hi >= lo) {
                    if (t == complexd(0.0, 0.0)) {
                        row.segment(lo, hi - lo + 1).setZero();
                        lo = nz;
                        hi = -1;
                    } else {
                        row.segment(lo, hi - lo + 1) *= t;
                    }
                }
                for (int m = 0; m < 4; ++m) {
                    const int c = d.geom->win[m];
                    row[c] += d.w[m];
                    lo = std::min(lo, c);
                    hi = std::max(hi, c);
                }
                const int tgt = d.geom->target;
                double* gg = MGg.row(tgt).data();
                double* gs = MGs.row(tgt).data();
                double* gn = MGn.row(tgt).data();
                double* sg = MSg.row(tgt).data();
                double* ss = MSs.row(tgt).data();
                double* sn = MSn.row(tgt).data();
                double* pg = MPg.row(tgt).data();
                double* ps = MPs.row(tgt).data();
                double* pn = MPn.row(tgt).data();
                const complexd* rp = row.data();
                for (int m = lo; m <= hi; ++m) {
                    const double re = rp[m].real(), im = rp[m].imag();
                    gg[m] += wG * cg[m] * re;
                    gs[m] += wG * cs[m] * re;
                    gn[m] += wG * cn[m] * re;
                    sg[m] += wS * cg[m] * re;
                    ss[m] += wS * cs[m] * re;
                    sn[m] += wS * cn[m] * re;
                    pg[m] += wP * cg[m] * im;
                    ps[m] += wP * cs[m] * im;
                    pn[m] += wP * cn[m] * im;
                }
            }
        }
    }

    // Exact fixed point of the source iteration:
    //   (I - K) [gd; sd] = F theta,  K = [[MGg, MGs], [MSg, MSs]]
    const Eigen::MatrixXd D1 = diff_matrix(nz, base_.z_spacing(), 1);
    const Eigen::VectorXd gcol = params_.extinction * base_.G_coll;  // g_c = gcol .* theta

    Eigen::MatrixXd K(2 * nz, 2 * nz);
    K.topLeftCorner(nz, nz) = MGg;
    K.topRightCorner(nz, nz) = MGs;
    K.bottomLeftCorner(nz, nz) = MSg;
    K.bottomRightCorner(nz, nz) = MSs;

    Eigen::MatrixXd F(2 * nz, nz);
    F.topRows(nz) = (MGg - MGs) * gcol.asDiagonal();
    F.topRows(nz) += MGn * D1;
    F.bottomRows(nz) = (MSg - MSs) * gcol.asDiagonal();
    F.bottomRows(nz) += MSn * D1;

    Eigen::MatrixXd sys = Eigen::MatrixXd::Identity(2 * nz, 2 * nz) - K;
    const Eigen::MatrixXd GS = Eigen::PartialPivLU<Eigen::MatrixXd>(sys).solve(F);

    RadiationOperators ops;
    ops.k = k;
    ops.Gd = GS.topRows(nz);
    ops.Sd = GS.bottomRows(nz);
    const Eigen::MatrixXd gcol_diag = gcol.asDiagonal();
    ops.Pim = MPg * (gcol_diag + ops.Gd) + MPs * (ops.Sd - gcol_diag) + MPn * D1;

    const Eigen::VectorXd ng = base_.n.cwiseProduct(base_.dMdG);
    Eigen::VectorXd flux_coef(nz);
    for (int i = 0; i < nz; ++i)
        flux_coef[i] = params_.swim_speed * base_.n[i] * base_.M[i] / base_.q[i];
    ops.L0 = params_.swim_speed * D1 * ng.asDiagonal() * ops.Gd +
             k * flux_coef.asDiagonal() * ops.Pim;
    return ops;
}

RadiationOperators radiative_response_matrix(const PerturbationContext& ctx, double k)
{
    return ctx.response_operators(k);
}

}  // namespace biostab
