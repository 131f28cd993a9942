#include "pfreq/onedim.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfreq/errors.hpp"

namespace pfreq {

namespace {

// Solve (-u_{i-1} + 2u_i - u_{i+1})/h^2 = f_i, zero ends, Thomas algorithm.
std::vector<double> thomas(const std::vector<double>& f, double h) {
    const std::size_t m = f.size();
    std::vector<double> c(m), d(m), u(m);
    const double h2 = h * h;
    double denom = 2.0;
    c[0] = -1.0 / denom;
    d[0] = f[0] * h2 / denom;
    for (std::size_t i = 1; i < m; ++i) {
        denom = 2.0 + c[i - 1];
        c[i] = -1.0 / denom;
        d[i] = (f[i] * h2 + d[i - 1]) / denom;
    }
    u[m - 1] = d[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) u[i] = d[i] - c[i] * u[i + 1];
    return u;
}

double energy(const std::vector<double>& u, double h) {
    double e = 0.0, prev = 0.0;
    for (double x : u) {
        e += (x - prev) * (x - prev);
        prev = x;
    }
    e += prev * prev;
    return e / h;
}

void symmetrize(std::vector<double>& v) {
    const std::size_t m = v.size();
    for (std::size_t i = 0; i < m / 2; ++i) {
        const double a = 0.5 * (v[i] + v[m - 1 - i]);
        v[i] = a;
        v[m - 1 - i] = a;
    }
}

struct Solve1D {
    std::vector<double> u;  // unnormalised extremal (w, or L2-normalised U for q = 2)
    double lambda;
};

Solve1D solve_segment(double length, double q, int n, bool sym) {
    if (!(q >= 1.0 && q <= 2.0)) throw DomainError("1-D solver: q must lie in [1,2]");
    if (n < 4) throw DomainError("1-D solver: need at least 4 intervals");
    if (!(length > 0.0) || !std::isfinite(length)) throw DomainError("1-D solver: length must be positive");
    const double h = length / n;
    const std::size_t m = std::size_t(n) - 1;
    if (q == 1.0) {
        auto w = thomas(std::vector<double>(m, 1.0), h);
        double t = 0.0;
        for (double x : w) t += x;
        t *= h;
        return {w, 1.0 / t};
    }
    if (q == 2.0) {
        std::vector<double> u(m);
        for (std::size_t i = 0; i < m; ++i) {
            const double x = (i + 1) * h;
            u[i] = x * (length - x);
        }
        double lam = 0.0, prev = 0.0;
        for (int it = 0; it < 500; ++it) {
            auto x = thomas(u, h);
            if (sym) symmetrize(x);
            double nx = 0.0;
            for (double v : x) nx += v * v;
            nx = std::sqrt(nx * h);
            for (auto& v : x) v /= nx;
            u = x;
            double uu = 0.0;
            for (double v : u) uu += v * v;
            lam = energy(u, h) / (uu * h);
            if (it > 2 && std::abs(lam - prev) <= 1e-14 * lam) return {u, lam};
            prev = lam;
        }
        throw ConvergenceError("1-D eigen solve did not converge", std::abs(lam - prev) / lam);
    }
    auto v = thomas(std::vector<double>(m, 1.0), h);
    double mu = 1.0 / *std::max_element(v.begin(), v.end());
    for (auto& x : v) x *= mu;
    double diff = 1.0;
    for (int it = 0; it < 200000; ++it) {
        std::vector<double> r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = std::pow(v[i], q - 1.0);
        auto x = thomas(r, h);
        if (sym) symmetrize(x);
        mu = 1.0 / *std::max_element(x.begin(), x.end());
        diff = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            x[i] *= mu;
            diff = std::max(diff, std::abs(x[i] - v[i]));
        }
        v.swap(x);
        if (diff <= 1e-12) {
            const double c = std::pow(mu, -1.0 / (2.0 - q));
            for (auto& y : v) y *= c;
            const double e = energy(v, h);
            return {v, std::pow(e, -(2.0 - q) / q)};
        }
    }
    throw ConvergenceError("1-D sublinear fixed point did not converge", diff);
}

double richardson(double coarse, double fine) { return (4.0 * fine - coarse) / 3.0; }

}  // namespace

double lambda1_segment(double length, double q, int n) { return solve_segment(length, q, n, false).lambda; }

double pi_2q(double q, int n) {
    if (n < 256) throw DomainError("pi_2q: need n >= 256");
    const double a = lambda1_segment(1.0, q, n);
    const double b = lambda1_segment(1.0, q, 2 * n);
    return std::sqrt(richardson(a, b));
}

double lambda1_interval(double q, int n) {
    const double p = pi_2q(q, n);
    return p * p * std::pow(2.0, -(2.0 + q) / q);
}

double lambda1_interval_direct(double q, int n) {
    if (n < 256) throw DomainError("lambda1_interval_direct: need n >= 256");
    const double a = solve_segment(2.0, q, n, true).lambda;
    const double b = solve_segment(2.0, q, 2 * n, true).lambda;
    return richardson(a, b);
}

Profile1D solve_g(double q, int n) {
    if (!(q >= 1.0 && q < 2.0)) throw DomainError("solve_g: q must lie in [1,2)");
    if (n < 256 || n % 2) throw DomainError("solve_g: need an even n >= 256");
    auto s = solve_segment(2.0, q, n, true);
    Profile1D p;
    p.n = n;
    p.h = 2.0 / n;
    p.q = q;
    p.values = std::move(s.u);
    p.lambda = s.lambda;
    return p;
}

double Profile1D::value(double t) const {
    if (!(t > -1.0 && t < 1.0)) return 0.0;
    const double x = (t + 1.0) / h;
    const int i = std::min(static_cast<int>(std::floor(x)), n - 1);
    const double frac = x - i;
    auto at = [&](int k) { return (k <= 0 || k >= n) ? 0.0 : values[std::size_t(k) - 1]; };
    return (1.0 - frac) * at(i) + frac * at(i + 1);
}

double Profile1D::derivative(double t) const {
    auto at = [&](int k) { return (k <= 0 || k >= n) ? 0.0 : values[std::size_t(k) - 1]; };
    auto slope = [&](int j) { return (at(j + 1) - at(j)) / h; };  // face j, midpoint -1 + (j+1/2)h
    const double x = (t + 1.0) / h - 0.5;
    if (x <= 0.0) return slope(0);
    if (x >= n - 1) return slope(n - 1);
    const int j = static_cast<int>(std::floor(x));
    const double frac = x - j;
    return (1.0 - frac) * slope(j) + frac * slope(j + 1);
}

double Profile1D::dirichlet_integral(double a, double b) const {
    auto at = [&](int k) { return (k <= 0 || k >= n) ? 0.0 : values[std::size_t(k) - 1]; };
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
        const double lo = -1.0 + j * h, hi = lo + h;
        if (lo < a - 1e-12 || hi > b + 1e-12) continue;
        const double d = (at(j + 1) - at(j)) / h;
        s += d * d;
    }
    return s * h;
}

double Profile1D::lq_integral() const {
    double s = 0.0;
    for (double v : values) s += std::pow(std::abs(v), q);
    return s * h;
}

}  // namespace pfreq
