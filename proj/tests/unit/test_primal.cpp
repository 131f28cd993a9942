#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pfreq/elliptic.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/primal.hpp"

using namespace pfreq;
using testing_helpers::random_field;
using testing_helpers::rel;

namespace {
const std::vector<Vec2> kLShape{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};

std::vector<Vec2> scaled(const std::vector<Vec2>& v, double s) {
    std::vector<Vec2> out;
    for (auto p : v) out.push_back(s * p);
    return out;
}
}  // namespace

TEST_SUITE("primal") {

TEST_CASE("square torsion against the series oracle") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 64);
    const FrequencySolution s = solve_torsion(d);
    CHECK(rel(1.0 / s.lambda1, oracle::square_torsion()) < 5e-3);
    CHECK(rel(s.lambda1_alt, s.lambda1) < 1e-8);
    // primal_max = ((2-q)/q) lambda^{-q/(2-q)} = T at q = 1.
    CHECK(rel(s.primal_max, 1.0 / s.lambda1) < 1e-8);
}

TEST_CASE("square eigenvalue equals the discrete closed form") {
    for (double h : {1.0 / 16, 1.0 / 32}) {
        auto d = build_rectangle(1.0, 1.0, h);
        const FrequencySolution s = solve_eigen(d, 1e-10);
        CHECK(rel(s.lambda1, oracle::square_discrete_eigen(h)) < 1e-9);
        CHECK(rel(s.lambda1_alt, s.lambda1) < 1e-6);
        CHECK(s.w.min() > 0.0);
        CHECK(std::isnan(s.primal_max));
    }
}

TEST_CASE("disk eigenvalue against the Bessel zero") {
    const double j = oracle::bessel_j01();
    CHECK(j == doctest::Approx(2.404825557695773).epsilon(1e-12));
    const double a = solve_eigen(build_disk(1.0, 1.0 / 32)).lambda1;
    const double b = solve_eigen(build_disk(1.0, 1.0 / 64)).lambda1;
    const double extrap = (4.0 * b - a) / 3.0;
    CHECK(rel(extrap, j * j) < 1e-2);
    CHECK(b > a);
}

TEST_CASE("sublinear extremal: cross-checks and positivity") {
    auto d = build_disk(1.0, 1.0 / 64);
    for (double q : {1.25, 1.5, 1.75}) {
        const FrequencySolution s = solve_sublinear(d, q, 1e-9);
        CHECK(s.w.min() > 0.0);
        CHECK(rel(s.lambda1_alt, s.lambda1) < 5e-3);
        CHECK(rel(s.primal_max, (2 - q) / q * std::pow(s.lambda1, -q / (2 - q))) < 1e-6);
        // -Delta w = w^{q-1}
        const ScalarField aw = apply_laplacian(s.w);
        for (std::size_t k = 0; k < d->size(); k += 97)
            CHECK(aw[k] == doctest::Approx(std::pow(s.w[k], q - 1)).epsilon(1e-6));
    }
    CHECK_THROWS_AS(solve_sublinear(d, 1.0, 1e-9), DomainError);
    CHECK_THROWS_AS(solve_sublinear(d, 2.0, 1e-9), DomainError);
}

TEST_CASE("q limits on the unit square") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 32);
    const double t = solve_torsion(d).lambda1, e = solve_eigen(d).lambda1;
    CHECK(rel(solve_frequency(d, 1.01).lambda1, t) < 0.03);
    CHECK(rel(solve_frequency(d, 1.99).lambda1, e) < 0.03);
}

TEST_CASE("Rayleigh quotient is an upper bound and domain monotone") {
    std::mt19937_64 rng(8);
    auto d = build_disk(1.0, 1.0 / 32);
    for (double q : {1.0, 1.5, 2.0}) {
        const double lam = solve_frequency(d, q).lambda1;
        for (int k = 0; k < 5; ++k) CHECK(rayleigh(random_field(d, rng, 0.0, 1.0), q) >= lam * (1 - 1e-9));
    }
    // A bump on the half-radius disk, extended by zero: both domains sit on
    // the same global lattice, so the quotient carries over unchanged.
    auto small = build_disk(0.5, 1.0 / 32);
    ScalarField b(small), ext(d);
    for (std::size_t k = 0; k < small->size(); ++k) {
        const Vec2 p = small->position(k);
        b[k] = 0.25 - (p.x * p.x + p.y * p.y);
        const int i = int(std::lround((p.x - d->origin().x) / d->h()));
        const int j = int(std::lround((p.y - d->origin().y) / d->h()));
        ext[std::size_t(d->node_index(i, j))] = b[k];
    }
    CHECK(rayleigh(ext, 1.5) == doctest::Approx(rayleigh(b, 1.5)).epsilon(1e-12));
    CHECK(rayleigh(b, 1.5) >= solve_frequency(small, 1.5).lambda1 * (1 - 1e-9));
    CHECK(solve_frequency(small, 1.5).lambda1 >= solve_frequency(d, 1.5).lambda1);
    CHECK_THROWS_AS(rayleigh(ScalarField(d), 1.5), DomainError);
}

TEST_CASE("scaling law at matched relative resolution") {
    for (double q : {1.0, 1.5, 2.0}) {
        const double a = solve_frequency(build_disk(1.0, 1.0 / 32), q).lambda1;
        const double b = solve_frequency(build_disk(2.0, 2.0 / 32), q).lambda1;
        CHECK(rel(b, std::pow(2.0, -4.0 / q) * a) < 1e-6);
    }
}

TEST_CASE("domain monotonicity and Faber-Krahn ordering") {
    const double h = 1.0 / 64;
    for (double q : {1.0, 1.5, 2.0}) {
        const double l1 = solve_frequency(build_rectangle(1.0, 1.0, h), q).lambda1;
        const double l2 = solve_frequency(build_rectangle(1.25, 1.25, h), q).lambda1;
        const double l3 = solve_frequency(build_rectangle(1.5, 1.5, h), q).lambda1;
        CHECK(l1 > l2);
        CHECK(l2 > l3);
        const double disk = solve_frequency(build_disk(1.0 / std::sqrt(oracle::pi), h), q).lambda1;
        const double ell = solve_frequency(build_polygon(scaled(kLShape, 1.0 / std::sqrt(3.0)), h), q).lambda1;
        CHECK(disk < l1);
        CHECK(l1 < ell);
    }
}

TEST_CASE("hidden functional at w^q equals the primal maximum") {
    auto d = build_disk(1.0, 1.0 / 64);
    for (double q : {1.25, 1.5, 1.75}) {
        const FrequencySolution s = solve_sublinear(d, q, 1e-10);
        ScalarField psi(d);
        for (std::size_t k = 0; k < d->size(); ++k) psi[k] = std::pow(s.w[k], q);
        CHECK(rel(hidden_functional(psi, q).value(), s.primal_max) < 1e-6);
    }
    CHECK(hidden_functional(ScalarField(d), 1.5).value() == 0.0);
    ScalarField neg(d, 1.0);
    neg[0] = -1.0;
    CHECK_THROWS_AS(hidden_functional(neg, 1.5), DomainError);
    CHECK_THROWS_AS(hidden_functional(ScalarField(d), 2.0), DomainError);
}

TEST_CASE("hidden functional is concave along segments") {
    std::mt19937_64 rng(12);
    auto d = build_disk(1.0, 1.0 / 16);
    std::uniform_real_distribution<double> eps(0.0, 1.0);
    for (double q : {1.25, 1.5, 1.75}) {
        for (int k = 0; k < 20; ++k) {
            const ScalarField a = random_field(d, rng, 0.0, 0.2), b = random_field(d, rng, 0.0, 0.2);
            const double e = eps(rng);
            ScalarField m(d);
            for (std::size_t i = 0; i < d->size(); ++i) m[i] = (1 - e) * a[i] + e * b[i];
            const double fa = hidden_functional(a, q).value(), fb = hidden_functional(b, q).value();
            const double fm = hidden_functional(m, q).value();
            CHECK(fm >= (1 - e) * fa + e * fb - 1e-12 * (std::abs(fa) + std::abs(fb)));
        }
    }
}

TEST_CASE("face power mean") {
    CHECK(face_power_mean(2.0, 2.0, 1.5) == 2.0);
    CHECK(face_power_mean(0.0, 0.0, 1.5) == 0.0);
    // Closed form in extended precision as the oracle, on both sides of the
    // switch to the series and far from it.
    for (double q : {1.25, 1.5, 1.75}) {
        for (double b : {1.0 + 1e-6, 1.0 + 0.999e-3, 1.0 + 1.001e-3, 1.5}) {
            const long double lq = q, lb = b;
            const long double r = (lb - 1.0L) / (lq * (std::pow(lb, 1.0L / lq) - 1.0L));
            const double oracle_value = double(std::pow(r, lq / (lq - 1.0L)));
            CHECK(std::abs(face_power_mean(1.0, b, q) - oracle_value) < 1e-12);
        }
    }
    CHECK(face_power_mean(1.0, 4.0, 1.5) > 1.0);
    CHECK(face_power_mean(1.0, 4.0, 1.5) < 4.0);
    CHECK_THROWS_AS(face_power_mean(-1.0, 1.0, 1.5), DomainError);
}

TEST_CASE("json record") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 16);
    const std::string j = to_json(solve_eigen(d));
    CHECK(j.find("\"primal_max\":null") != std::string::npos);
    CHECK(j.find("\"lambda1\":") != std::string::npos);
}

}  // TEST_SUITE primal
