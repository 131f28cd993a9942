#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pfreq/bounds.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/onedim.hpp"

using namespace pfreq;
using testing_helpers::rel;

namespace {
const std::vector<Vec2> kLShape{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
}

TEST_SUITE("bounds") {

TEST_CASE("closed forms on the unit disk") {
    const double pi = oracle::pi;
    CHECK(hersch_makai_lower(pi, 1.0, 2.0, pi) == doctest::Approx(pi * pi / 4));
    CHECK(polya_upper(pi, 2 * pi, 2.0, pi) == doctest::Approx(pi * pi));
    CHECK(cheeger_lower(pi, 2.0, 2.0) == doctest::Approx(1.0));
    // Equality case at q = 1: 1/T = 8/pi with I_2 = pi/2.
    CHECK(diaz_weinstein_lower(pi / 2, 1.0) == doctest::Approx(8.0 / pi));
    CHECK_THROWS_AS(diaz_weinstein_lower(1.0, 2.0), DomainError);
    // At q = 2 the two Hersch-Makai forms coincide.
    CHECK(hersch_makai_perimeter_lower(7.0, 0.5, 2.0, pi) == doctest::Approx(hersch_makai_lower(3.0, 0.5, 2.0, pi)));
    CHECK(faber_krahn_lower(2.0, 1.0, 5.0, 1.0) == doctest::Approx(1.25));
}

TEST_CASE("known Cheeger constants") {
    auto disk = build_disk(2.0, 1.0 / 16);
    CHECK(known_cheeger_constant(*disk).value() == doctest::Approx(1.0));
    auto sq = build_rectangle(1.0, 1.0, 1.0 / 16);
    CHECK(known_cheeger_constant(*sq).value() == doctest::Approx(oracle::square_cheeger()));
    // Long rectangle tends to 2/b.
    auto strip = build_rectangle(200.0, 1.0, 1.0 / 8);
    CHECK(known_cheeger_constant(*strip).value() == doctest::Approx(2.0).epsilon(1e-2));
    auto l = build_polygon(kLShape, 1.0 / 16);
    CHECK_FALSE(known_cheeger_constant(*l).has_value());
}

TEST_CASE("transplant bound at q = 1 on the disk") {
    auto d = build_disk(1.0, 1.0 / 64);
    const double lb = transplant_lower(*d, summarize(*d).inradius, 1.0);
    // Continuum value: g = (1 - t^2)/2 so |g'(d - 1)| = r, and the integral of
    // r^2 over the unit disk is pi/2.
    CHECK(rel(lb, 2.0 / oracle::pi) < 0.02);
    CHECK_THROWS_AS(transplant_lower(*d, 1.0, 2.0), DomainError);
}

TEST_CASE("report on the square") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 64);
    const auto reps = bound_report(d, {1.0, 1.5, 2.0});
    REQUIRE(reps.size() == 3);
    for (const auto& r : reps) {
        CHECK(r.error.empty());
        CHECK(r.ok());
        CHECK(r.hm_ordering_ok);
        CHECK(r.rows.size() == 7);
        for (const auto& row : r.rows)
            if (row.applicable) {
                CHECK(std::isfinite(row.value));
                CHECK(row.certified);
            }
    }
    CHECK_FALSE(reps[2].find("diaz_weinstein")->applicable);
    CHECK_FALSE(reps[2].find("transplant")->applicable);
    CHECK(reps[0].find("diaz_weinstein")->applicable);
    CHECK(reps[0].find("polya")->type == BoundType::Upper);
    CHECK(reps[0].find("nope") == nullptr);
}

TEST_CASE("non-convex domains gate the convex-only rows") {
    auto d = build_polygon(kLShape, 1.0 / 32);
    const auto reps = bound_report(d, {1.5});
    REQUIRE(reps.size() == 1);
    const BoundReport& r = reps[0];
    CHECK(r.error.empty());
    for (const char* name : {"hersch_makai", "polya", "hersch_makai_perimeter", "transplant"}) {
        CHECK_FALSE(r.find(name)->applicable);
        CHECK(std::isnan(r.find(name)->value));
        CHECK_FALSE(r.find(name)->note.empty());
    }
    CHECK(r.find("faber_krahn")->applicable);
    CHECK(r.find("faber_krahn")->satisfied);
    CHECK_FALSE(r.find("cheeger")->certified);
    CHECK(r.ok());
}

TEST_CASE("invalid q is reported per row set, not thrown") {
    auto d = build_disk(1.0, 1.0 / 16);
    const auto reps = bound_report(d, {2.5});
    REQUIRE(reps.size() == 1);
    CHECK_FALSE(reps[0].error.empty());
    CHECK(reps[0].rows.empty());
    CHECK_FALSE(reps[0].ok());
}

TEST_CASE("json carries nulls for inapplicable rows") {
    auto d = build_polygon(kLShape, 1.0 / 16);
    const std::string j = to_json(bound_report(d, {2.0})[0]);
    CHECK(j.find("null") != std::string::npos);
    CHECK(j.find("\"hm_ordering_ok\":true") != std::string::npos);
}

}  // TEST_SUITE bounds
