#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "pfreq/convex.hpp"
#include "pfreq/errors.hpp"

using namespace pfreq;
using testing_helpers::rel;

TEST_SUITE("convex") {

TEST_CASE("ExtReal") {
    CHECK_THROWS_AS(ExtReal(std::nan("")), DomainError);
    CHECK_THROWS_AS(ExtReal(-std::numeric_limits<double>::infinity()), DomainError);
    CHECK(ExtReal(std::numeric_limits<double>::infinity()).is_infinite());
    CHECK(ExtReal(3.0) < ExtReal::infinity());
    CHECK(ExtReal(3.0) < ExtReal(4.0));
    CHECK((ExtReal(1.0) + ExtReal::infinity()).is_infinite());
    CHECK((ExtReal(1.0) + ExtReal(2.0)).value() == 3.0);
    CHECK(ExtReal::infinity() == ExtReal::infinity());
}

TEST_CASE("F_q effective domain") {
    const double q = 1.5;
    CHECK(F_q(q, 0.0, {0, 0}).value() == 0.0);
    CHECK(F_q(q, 0.0, {1, 0}).is_infinite());
    CHECK(F_q(q, -1.0, {0, 0}).is_infinite());
    CHECK(F_q(q, 4.0, {3, 4}).value() == doctest::Approx(25.0 * std::pow(4.0, 2.0 / q - 2.0)));
    CHECK_THROWS_AS(F_q(2.5, 1.0, {0, 0}), DomainError);
    CHECK(G_q(2.0, -2.0, {1, 1}).value() == doctest::Approx(1.0));
    CHECK(G_q(q, 0.0, {1, 0}).is_infinite());
}

TEST_CASE("F_q is jointly convex and homogeneous of degree 2/q") {
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(0.01, 3.0), v(-3.0, 3.0);
    for (double q : {1.2, 1.5, 1.8}) {
        for (int k = 0; k < 200; ++k) {
            const double t1 = u(rng), t2 = u(rng);
            const Vec2 x1{v(rng), v(rng)}, x2{v(rng), v(rng)};
            const double mid = F_q(q, 0.5 * (t1 + t2), 0.5 * (x1 + x2)).value();
            CHECK(mid <= 0.5 * (F_q(q, t1, x1).value() + F_q(q, t2, x2).value()) * (1 + 1e-12));
            const double s = u(rng);
            CHECK(F_q(q, s * t1, s * x1).value() ==
                  doctest::Approx(std::pow(s, 2.0 / q) * F_q(q, t1, x1).value()).epsilon(1e-12));
        }
    }
}

TEST_CASE("closed-form conjugate matches brute force") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.3, 3.0), a(0.0, 6.283185307179586);
    for (double q : {1.2, 1.5, 1.8}) {
        const ConvexIntegrand f = [q](double t, Vec2 x) { return F_q(q, t, x); };
        for (int k = 0; k < 5; ++k) {
            const double s = -u(rng), m = u(rng), th = a(rng);
            const Vec2 xi{m * std::cos(th), m * std::sin(th)};
            const double brute = lf_conjugate_search(f, s, xi).value;
            CHECK(rel(brute, F_q_star_closed(q, s, xi).value()) < 1e-3);
        }
    }
}

TEST_CASE("conjugate is +inf off the closed half-plane") {
    CHECK(F_q_star_closed(1.5, 0.5, {1, 0}).is_infinite());
    CHECK(F_q_star_closed(1.5, 0.0, {1, 0}).is_infinite());
    CHECK(F_q_star_closed(1.5, -1.0, {0, 0}).value() == 0.0);
    CHECK(F_q_star_closed(1.5, 0.0, {0, 0}).value() == 0.0);
}

TEST_CASE("Fenchel-Young inequality") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.01, 3.0), v(-3.0, 3.0);
    for (double q : {1.2, 1.5, 1.8}) {
        for (int k = 0; k < 500; ++k) {
            const double t = u(rng), s = -u(rng);
            const Vec2 x{v(rng), v(rng)}, xi{v(rng), v(rng)};
            const double lhs = s * t + xi.x * x.x + xi.y * x.y;
            CHECK(lhs <= F_q(q, t, x).value() + F_q_star_closed(q, s, xi).value() + 1e-12);
        }
    }
}

TEST_CASE("brute force on a fixed box is a lower bound of the search") {
    const double q = 1.5;
    const ConvexIntegrand f = [q](double t, Vec2 x) { return F_q(q, t, x); };
    const Vec2 xi{1.0, 0.5};
    const double s = -0.7;
    const double coarse = lf_conjugate_bruteforce(f, s, xi, default_box(s, xi), 64);
    const double fine = lf_conjugate_search(f, s, xi).value;
    CHECK(coarse <= fine + 1e-12);
    CHECK_THROWS_AS(lf_conjugate_bruteforce(f, s, xi, default_box(s, xi), 8), DomainError);
}

TEST_CASE("rescaling identity") {
    for (double q : {1.2, 1.5, 1.8}) {
        const auto [lhs, rhs] = rescaled_conjugate_identity_check(q, -0.8, {0.6, -1.1});
        CHECK(rel(lhs, rhs) < 1e-3);
    }
    CHECK_THROWS_AS(rescaled_conjugate_identity_check(1.5, 0.5, {1, 0}), DomainError);
}

TEST_CASE("sampled check is deterministic per seed") {
    const ConjugateCheck a = conjugate_check(1.5, 5, 9), b = conjugate_check(1.5, 5, 9);
    CHECK(a.max_rel_closed == b.max_rel_closed);
    CHECK(a.max_rel_identity == b.max_rel_identity);
    CHECK(a.max_rel_closed < 1e-3);
}

}  // TEST_SUITE convex
