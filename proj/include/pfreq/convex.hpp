#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <utility>

#include "pfreq/geometry.hpp"

namespace pfreq {

// A real number or +infinity. Never NaN.
class ExtReal {
public:
    ExtReal() = default;
    ExtReal(double v);  // NOLINT: implicit on purpose, finite values are the common case
    static ExtReal infinity();

    bool finite() const { return !inf_; }
    bool is_infinite() const { return inf_; }
    // +inf maps to the IEEE infinity.
    double value() const;

    std::partial_ordering operator<=>(const ExtReal& o) const;
    bool operator==(const ExtReal& o) const = default;

private:
    double v_ = 0.0;
    bool inf_ = false;
};

ExtReal operator+(ExtReal a, ExtReal b);

// F_q(t,x) = |x|^2 t^{2/q-2} for t > 0, 0 at (0,0), +inf otherwise.
ExtReal F_q(double q, double t, Vec2 x);
// Same with |x|^2 given directly.
ExtReal F_q_sq(double q, double t, double x2);
// G_q(s,xi) = |xi|^q / |s|^{q-1} for s < 0, 0 at (0,0), +inf otherwise. q in (1,2].
ExtReal G_q(double q, double s, Vec2 xi);
double alpha_q(double q);
// alpha_q |xi|^{2q/(2-q)} |s|^{2(1-q)/(2-q)} for s < 0, 0 at (0,0), +inf otherwise.
ExtReal F_q_star_closed(double q, double s, Vec2 xi);

using ConvexIntegrand = std::function<ExtReal(double t, Vec2 x)>;

struct SearchBox {
    double t_max;
    double m_max;
    double t_min = 0.0;
    double m_min = 0.0;
};

// Default box [0, 10|xi|max(1,1/|s|)]^2 in (t, |x|).
SearchBox default_box(double s, Vec2 xi);

// max over an n x n grid of (t, m) in the box of s t + |xi| m - f(t, m xi/|xi|).
// Rotational reduction: x is aligned with xi. Returns -inf-free finite values
// (points where f is infinite are skipped; 0 is always a candidate at (0,0)).
double lf_conjugate_bruteforce(const ConvexIntegrand& f, double s, Vec2 xi, const SearchBox& box, int n = 64);

struct ConjugateSearch {
    double value;
    double t;
    double m;
    SearchBox box;
};

// Nested grid searches over log t and log m in [-80, 80], each zoomed onto
// the best sample and its neighbours until cells are below 1e-13. The
// returned box brackets t; its m range collapses to the inner argmax.
ConjugateSearch lf_conjugate_search(const ConvexIntegrand& f, double s, Vec2 xi, int n = 64, int zooms = 60);

// lhs: brute-force conjugate of F_q/(2q); rhs: ((2-q)/2)(q-1)^{2(q-1)/(2-q)} G_q^{2/(2-q)}.
std::pair<double, double> rescaled_conjugate_identity_check(double q, double s, Vec2 xi, int n = 64);

struct ConjugateCheck {
    double q;
    int samples;
    double max_rel_closed;    // brute-force F_q* against F_q_star_closed
    double max_rel_identity;  // both sides of the rescaling identity
};

// Random (s, xi) with |s|, |xi| log-uniform in [1/4, 4], s < 0, uniform angle.
ConjugateCheck conjugate_check(double q, int samples = 100, std::uint64_t seed = 1, int n = 64);

}  // namespace pfreq
