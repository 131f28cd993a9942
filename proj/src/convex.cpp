#include "pfreq/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "pfreq/errors.hpp"

namespace pfreq {

ExtReal::ExtReal(double v) {
    if (std::isnan(v)) throw DomainError("ExtReal: NaN");
    if (v == std::numeric_limits<double>::infinity()) inf_ = true;
    else if (v == -std::numeric_limits<double>::infinity()) throw DomainError("ExtReal: -inf");
    else v_ = v;
}

ExtReal ExtReal::infinity() {
    ExtReal r;
    r.inf_ = true;
    return r;
}

double ExtReal::value() const { return inf_ ? std::numeric_limits<double>::infinity() : v_; }

std::partial_ordering ExtReal::operator<=>(const ExtReal& o) const {
    if (inf_ && o.inf_) return std::partial_ordering::equivalent;
    if (inf_) return std::partial_ordering::greater;
    if (o.inf_) return std::partial_ordering::less;
    return v_ <=> o.v_;
}

ExtReal operator+(ExtReal a, ExtReal b) {
    if (a.is_infinite() || b.is_infinite()) return ExtReal::infinity();
    return ExtReal(a.value() + b.value());
}

namespace {

void require_open(double q, const char* who) {
    if (!(q > 1.0 && q < 2.0)) throw DomainError(std::string(who) + ": q must lie in (1,2)");
}

}  // namespace

ExtReal F_q_sq(double q, double t, double x2) {
    require_open(q, "F_q");
    if (t > 0.0) return ExtReal(x2 * std::pow(t, 2.0 / q - 2.0));
    if (t == 0.0 && x2 == 0.0) return ExtReal(0.0);
    return ExtReal::infinity();
}

ExtReal F_q(double q, double t, Vec2 x) { return F_q_sq(q, t, x.x * x.x + x.y * x.y); }

ExtReal G_q(double q, double s, Vec2 xi) {
    if (!(q > 1.0 && q <= 2.0)) throw DomainError("G_q: q must lie in (1,2]");
    const double m = norm(xi);
    if (s < 0.0) return ExtReal(std::pow(m, q) / std::pow(-s, q - 1.0));
    if (s == 0.0 && m == 0.0) return ExtReal(0.0);
    return ExtReal::infinity();
}

double alpha_q(double q) {
    require_open(q, "alpha_q");
    return (2.0 - q) / (2.0 * q) * std::pow((q - 1.0) / q, 2.0 * (q - 1.0) / (2.0 - q)) *
           std::pow(0.5, q / (2.0 - q));
}

ExtReal F_q_star_closed(double q, double s, Vec2 xi) {
    require_open(q, "F_q_star_closed");
    const double m = norm(xi);
    if (s < 0.0) {
        if (m == 0.0) return ExtReal(0.0);
        // Work in logs: the exponents blow up as q -> 2.
        const double lg = std::log(alpha_q(q)) + 2.0 * q / (2.0 - q) * std::log(m) +
                          2.0 * (1.0 - q) / (2.0 - q) * std::log(-s);
        return ExtReal(std::exp(lg));
    }
    if (s == 0.0 && m == 0.0) return ExtReal(0.0);
    return ExtReal::infinity();
}

SearchBox default_box(double s, Vec2 xi) {
    const double m = norm(xi);
    const double scale = 10.0 * std::max(m, 1e-300) * std::max(1.0, s != 0.0 ? 1.0 / std::abs(s) : 1.0);
    return {scale, scale};
}

namespace {

struct GridMax {
    double value;
    int it, im;
};

GridMax grid_max(const ConvexIntegrand& f, double s, Vec2 xi, const SearchBox& b, int n) {
    const double m = norm(xi);
    const Vec2 dir = m > 0.0 ? (1.0 / m) * xi : Vec2{1.0, 0.0};
    GridMax best{-std::numeric_limits<double>::infinity(), 0, 0};
    for (int a = 0; a < n; ++a) {
        const double t = b.t_min + (b.t_max - b.t_min) * a / (n - 1);
        for (int c = 0; c < n; ++c) {
            const double mm = b.m_min + (b.m_max - b.m_min) * c / (n - 1);
            const ExtReal fv = f(t, mm * dir);
            if (fv.is_infinite()) continue;
            const double val = s * t + m * mm - fv.value();
            if (val > best.value) best = {val, a, c};
        }
    }
    return best;
}

}  // namespace

double lf_conjugate_bruteforce(const ConvexIntegrand& f, double s, Vec2 xi, const SearchBox& box, int n) {
    if (n < 64) throw DomainError("lf_conjugate_bruteforce: need at least 64 samples per axis");
    if (!(box.t_max > box.t_min) || !(box.m_max > box.m_min)) throw DomainError("lf_conjugate_bruteforce: empty box");
    const GridMax g = grid_max(f, s, xi, box, n);
    // (0,0) lies in the effective domain of every integrand considered here.
    const ExtReal f0 = f(0.0, {0.0, 0.0});
    const double origin = f0.finite() ? -f0.value() : -std::numeric_limits<double>::infinity();
    return std::max(g.value, origin);
}

namespace {

struct Peak1D {
    double value;
    double x;  // log coordinate of the best sample
    double lo, hi;
};

// Grid maximisation of a unimodal function on [lo, hi], zooming onto the
// best sample and its two neighbours. Unimodality survives the change of
// variable, so the bracket never loses the maximiser.
template <class F>
Peak1D zoom_max(F&& g, double lo, double hi, int n, int zooms) {
    Peak1D best{-std::numeric_limits<double>::infinity(), lo, lo, hi};
    for (int z = 0; z <= zooms; ++z) {
        const double dx = (hi - lo) / (n - 1);
        int arg = -1;
        double local = -std::numeric_limits<double>::infinity();
        for (int i = 0; i < n; ++i) {
            const double v = g(lo + i * dx);
            if (v > local) {
                local = v;
                arg = i;
            }
        }
        if (arg < 0) break;
        if (local > best.value) best = {local, lo + arg * dx, lo, hi};
        if (dx < 1e-13) break;
        const double c = lo + arg * dx;
        lo = c - dx;
        hi = c + dx;
    }
    return best;
}

}  // namespace

ConjugateSearch lf_conjugate_search(const ConvexIntegrand& f, double s, Vec2 xi, int n, int zooms) {
    if (n < 64) throw DomainError("lf_conjugate_search: need at least 64 samples per axis");
    const double m = norm(xi);
    const Vec2 dir = m > 0.0 ? (1.0 / m) * xi : Vec2{1.0, 0.0};
    // Nested 1-D searches in log t and log |x|. The inner supremum of a jointly
    // concave function is concave in t, so both levels are unimodal; a joint
    // 2-D grid gets trapped on the narrow ridge that forms as q -> 2.
    constexpr double kRange = 80.0;
    double arg_b = 0.0;
    auto inner = [&](double a) {
        const double t = std::exp(a);
        auto g = [&](double b) {
            const double mm = std::exp(b);
            const ExtReal fv = f(t, mm * dir);
            return fv.is_infinite() ? -std::numeric_limits<double>::infinity() : s * t + m * mm - fv.value();
        };
        const Peak1D p = zoom_max(g, -kRange, kRange, n, zooms);
        arg_b = p.x;
        return p.value;
    };
    const Peak1D outer = zoom_max(inner, -kRange, kRange, n, zooms);
    inner(outer.x);
    double best = outer.value, bt = std::exp(outer.x), bm = std::exp(arg_b);
    const ExtReal f0 = f(0.0, {0.0, 0.0});
    if (f0.finite() && -f0.value() > best) {
        best = -f0.value();
        bt = 0.0;
        bm = 0.0;
    }
    return {best, bt, bm, SearchBox{std::exp(outer.hi), bm, std::exp(outer.lo), bm}};
}

std::pair<double, double> rescaled_conjugate_identity_check(double q, double s, Vec2 xi, int n) {
    require_open(q, "rescaled_conjugate_identity_check");
    if (!(s < 0.0)) throw DomainError("rescaled_conjugate_identity_check: s must be negative");
    const double c = 1.0 / (2.0 * q);
    ConvexIntegrand f = [q, c](double t, Vec2 x) {
        const ExtReal v = F_q(q, t, x);
        return v.finite() ? ExtReal(c * v.value()) : v;
    };
    const double lhs = lf_conjugate_search(f, s, xi, n).value;
    const double g = G_q(q, s, xi).value();
    const double rhs = (2.0 - q) / 2.0 * std::pow(q - 1.0, 2.0 * (q - 1.0) / (2.0 - q)) * std::pow(g, 2.0 / (2.0 - q));
    return {lhs, rhs};
}

ConjugateCheck conjugate_check(double q, int samples, std::uint64_t seed, int n) {
    require_open(q, "conjugate_check");
    if (samples < 1) throw DomainError("conjugate_check: samples must be positive");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const ConvexIntegrand f = [q](double t, Vec2 x) { return F_q(q, t, x); };
    ConjugateCheck r{q, samples, 0.0, 0.0};
    for (int k = 0; k < samples; ++k) {
        const double s = -std::exp(std::log(0.25) + u(rng) * std::log(16.0));
        const double m = std::exp(std::log(0.25) + u(rng) * std::log(16.0));
        const double th = 2.0 * std::numbers::pi * u(rng);
        const Vec2 xi{m * std::cos(th), m * std::sin(th)};
        const double brute = lf_conjugate_search(f, s, xi, n).value;
        const double closed = F_q_star_closed(q, s, xi).value();
        r.max_rel_closed = std::max(r.max_rel_closed, std::abs(brute - closed) / closed);
        const auto [lhs, rhs] = rescaled_conjugate_identity_check(q, s, xi, n);
        r.max_rel_identity = std::max(r.max_rel_identity, std::abs(lhs - rhs) / rhs);
    }
    return r;
}

}  // namespace pfreq
