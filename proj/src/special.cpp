#include "biostab/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace biostab {

namespace {

constexpr double EULER_GAMMA = 0.57721566490153286060651209008240;

// Series for E_n(x), x < 1 (Abramowitz & Stegun 5.1.12).
double expint_series(int n, double x)
{
    const int nm1 = n - 1;
    double ans = (nm1 != 0) ? 1.0 / nm1 : -std::log(x) - EULER_GAMMA;
    double fact = 1.0;
    for (int i = 1; i <= 60; ++i) {
        fact *= -x / i;
        double del;
        if (i != nm1) {
            del = -fact / (i - nm1);
        } else {
            double psi = -EULER_GAMMA;
            for (int ii = 1; ii <= nm1; ++ii) psi += 1.0 / ii;
            del = fact * (-std::log(x) + psi);
        }
        ans += del;
        if (std::abs(del) < std::abs(ans) * 1e-17) return ans;
    }
    throw std::runtime_error("expint: series failed to converge");
}

// Modified Lentz continued fraction for E_n(x), x >= 1.
double expint_contfrac(int n, double x)
{
    const double tiny = std::numeric_limits<double>::min() * 1e8;
    const int nm1 = n - 1;
    double b = x + n;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 200; ++i) {
        double a = -static_cast<double>(i) * (nm1 + i);
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        double del = c * d;
        h *= del;
        if (std::abs(del - 1.0) < 1e-16) return h * std::exp(-x);
    }
    throw std::runtime_error("expint: continued fraction failed to converge");
}

// int_0^u s E_n(s) ds = 1/(n+1) - E_{n+2}(u) - u E_{n+1}(u)
double en_first_moment(int n, double u)
{
    return 1.0 / (n + 1) - expint(n + 2, u) - u * expint(n + 1, u);
}

}  // namespace

double expint(int n, double x)
{
    if (n < 1) throw std::invalid_argument("expint: order must be >= 1");
    if (x < 0.0) throw std::invalid_argument("expint: negative argument");
    if (x == 0.0) {
        if (n == 1)
            throw std::domain_error("expint: E1 diverges at x = 0");
        return 1.0 / (n - 1);
    }
    if (x >= EXPINT_SWITCH) return expint_contfrac(n, x);
    return expint_series(n, x);
}

double e1_row_integral(double tau, double kappa)
{
    return 2.0 - expint(2, tau) - expint(2, kappa - tau);
}

double e1_row_moment(double tau, double kappa)
{
    // int_0^u s E1 ds = 1/2 - E3(u) - u E2(u); right side minus left side.
    return en_first_moment(1, kappa - tau) - en_first_moment(1, tau);
}

double e2sgn_row_integral(double tau, double kappa)
{
    return expint(3, kappa - tau) - expint(3, tau);
}

double e2sgn_row_moment(double tau, double kappa)
{
    return -(en_first_moment(2, tau) + en_first_moment(2, kappa - tau));
}

double e3_row_integral(double tau, double kappa)
{
    return 2.0 / 3.0 - expint(4, tau) - expint(4, kappa - tau);
}

double e3_row_moment(double tau, double kappa)
{
    return en_first_moment(3, kappa - tau) - en_first_moment(3, tau);
}

void gauss_legendre(int n, double a, double b,
                    std::vector<double>& nodes, std::vector<double>& weights)
{
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    const int m = (n + 1) / 2;
    const double xm = 0.5 * (b + a);
    const double xl = 0.5 * (b - a);
    for (int i = 0; i < m; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        nodes[i] = xm - xl * z;
        nodes[n - 1 - i] = xm + xl * z;
        weights[i] = 2.0 * xl / ((1.0 - z * z) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

AngularQuadrature::AngularQuadrature(int nmu_, int nphi_)
    : nmu(nmu_), nphi(nphi_)
{
    if (nmu < 2) throw std::invalid_argument("AngularQuadrature: nmu too small");
    if (nphi < 2 || nphi % 2 != 0)
        throw std::invalid_argument("AngularQuadrature: nphi must be even and >= 2");

    gauss_legendre(nmu, 0.0, 1.0, mu, wmu);
    wphi = 2.0 * M_PI / nphi;
    phi.resize(nphi);
    for (int j = 0; j < nphi; ++j) phi[j] = wphi * j;

    directions.reserve(2 * static_cast<size_t>(nmu) * nphi);
    for (int h = 0; h < 2; ++h) {
        const double sign = (h == 0) ? 1.0 : -1.0;
        for (int i = 0; i < nmu; ++i) {
            const double nu = sign * mu[i];
            const double st = std::sqrt(std::max(0.0, 1.0 - nu * nu));
            for (int j = 0; j < nphi; ++j) {
                directions.push_back(
                    {nu, st * std::cos(phi[j]), st * std::sin(phi[j]), wmu[i] * wphi});
            }
        }
    }
}

double AngularQuadrature::solid_angle_sum() const
{
    double s = 0.0;
    for (const auto& d : directions) s += d.weight;
    return s;
}

double AngularQuadrature::nu_moment(int power) const
{
    double s = 0.0;
    for (const auto& d : directions) s += d.weight * std::pow(d.nu, power);
    return s;
}

}  // namespace biostab
