#include <sstream>

#include "doctest.h"
#include "helpers.hpp"
#include "oracles.hpp"
#include "pfreq/errors.hpp"
#include "pfreq/geometry.hpp"
#include "pfreq/parse.hpp"

using namespace pfreq;
using testing_helpers::rel;

namespace {
const std::vector<Vec2> kLShape{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}};
}

TEST_SUITE("geometry") {

TEST_CASE("rectangle mask keeps strictly interior lattice nodes") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 16);
    CHECK(d->size() == 15 * 15);
    CHECK(d->convex());
    auto r = build_rectangle(8.0, 1.0, 1.0 / 16);
    CHECK(r->size() == 127 * 15);
    // Outer ring of the stored lattice is exterior.
    for (int i = 0; i < d->nx(); ++i) {
        CHECK_FALSE(d->interior(i, 0));
        CHECK_FALSE(d->interior(i, d->ny() - 1));
    }
}

TEST_CASE("neighbour and face tables are consistent") {
    auto d = build_polygon(kLShape, 1.0 / 16);
    for (std::size_t k = 0; k < d->size(); ++k) {
        const int i = d->node_i(k), j = d->node_j(k);
        CHECK(d->node_index(i, j) == int(k));
        CHECK(d->west(k) == d->node_index(i - 1, j));
        CHECK(d->north(k) == d->node_index(i, j + 1));
        CHECK(d->x_face_hi(d->face_w(k)) == int(k));
        CHECK(d->x_face_lo(d->face_e(k)) == int(k));
        CHECK(d->y_face_hi(d->face_s(k)) == int(k));
        CHECK(d->y_face_lo(d->face_n(k)) == int(k));
    }
}

TEST_CASE("disk summary approaches continuum values") {
    const double h = 1.0 / 64;
    auto d = build_disk(1.0, h);
    const GeometricSummary g = summarize(*d);
    CHECK(rel(g.area, oracle::pi) < 0.03);
    // Binary marching squares only produces axis and diagonal segments, which
    // overestimate a circle by a few percent at any resolution.
    CHECK(rel(g.perimeter, 2 * oracle::pi) < 0.06);
    CHECK(std::abs(g.inradius - 1.0) <= 1.5 * h);
    CHECK(std::abs(g.centroid.x) < 1e-12);
    CHECK(std::abs(g.centroid.y) < 1e-12);
    CHECK(std::abs(g.circumradius - 1.0) <= 1.5 * h);
}

TEST_CASE("rectangle inradius and perimeter") {
    const double h = 1.0 / 32;
    auto d = build_rectangle(8.0, 1.0, h);
    const GeometricSummary g = summarize(*d);
    CHECK(g.inradius == doctest::Approx(0.5).epsilon(1e-12));
    // Contour sits h/2 inside each side, corners are cut diagonally.
    CHECK(g.perimeter == doctest::Approx(18.0 - 4 * h - 2 * (2 - std::sqrt(2.0)) * h).epsilon(1e-12));
    const GeometricSummary sq = summarize(*build_rectangle(1.0, 1.0, h));
    CHECK(rel(sq.perimeter, 4.0) < 0.05);
    CHECK(std::abs(sq.area - 1.0) < 3 * h);
    CHECK(g.centroid.x == doctest::Approx(4.0));
}

TEST_CASE("marching squares on a single node and a plus shape") {
    // One interior node: four corner cases, each h/sqrt(2).
    std::vector<std::uint8_t> m(9, 0);
    m[4] = 1;
    auto one = build_from_mask(1.0, {0, 0}, 3, 3, m, true);
    CHECK(mask_perimeter(*one) == doctest::Approx(4 * std::sqrt(0.5)));
}

TEST_CASE("polygon validation") {
    CHECK(polygon_is_convex({{0, 0}, {1, 0}, {1, 1}, {0, 1}}));
    CHECK_FALSE(polygon_is_convex(kLShape));
    CHECK_FALSE(polygon_is_simple({{0, 0}, {1, 1}, {1, 0}, {0, 1}}));
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}, 0.05), DomainError);
    CHECK_THROWS_AS(build_polygon({{0, 0}, {1, 0}}, 0.05), DomainError);
    auto l = build_polygon(kLShape, 1.0 / 16);
    CHECK_FALSE(l->convex());
}

TEST_CASE("coarse spacing is rejected") {
    CHECK_THROWS_AS(build_disk(1.0, 0.5), DomainError);
    CHECK_THROWS_AS(build_rectangle(1.0, 1.0, 0.25), DomainError);
    CHECK_THROWS_AS(build_rectangle(-1.0, 1.0, 0.01), DomainError);
}

TEST_CASE("polar moment of the disk") {
    auto d = build_disk(1.0, 1.0 / 128);
    CHECK(rel(moment(*d, 2.0, {0, 0}), oracle::pi / 2) < 0.02);
    const auto [val, at] = min_moment(*d, 2.0);
    CHECK(std::abs(at.x) < 1e-6);
    CHECK(std::abs(at.y) < 1e-6);
    CHECK(val == doctest::Approx(moment(*d, 2.0, {0, 0})).epsilon(1e-9));
}

TEST_CASE("min_moment matches a brute-force grid search") {
    auto d = build_polygon(kLShape, 1.0 / 16);
    for (double p : {2.0, 4.0, 6.0}) {
        double best = 1e300;
        for (int a = 0; a <= 200; ++a)
            for (int b = 0; b <= 200; ++b) best = std::min(best, moment(*d, p, {a / 100.0, b / 100.0}));
        const double found = min_moment(*d, p).first;
        CHECK(found <= best * (1 + 1e-9));
        CHECK(found >= best * (1 - 1e-3));
    }
}

TEST_CASE("minimal enclosing circle") {
    Vec2 c;
    CHECK(min_enclosing_radius({{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}}, &c) == doctest::Approx(std::sqrt(0.5)));
    CHECK(c.x == doctest::Approx(0.5));
    CHECK(min_enclosing_radius({{0, 0}, {2, 0}, {1, 0.1}}) == doctest::Approx(1.0));
}

TEST_CASE("boundary distance and layers") {
    auto d = build_rectangle(1.0, 1.0, 1.0 / 16);
    const auto& dist = d->boundary_distance();
    const auto& layer = d->boundary_layer();
    for (std::size_t k = 0; k < d->size(); ++k) {
        const int i = d->node_i(k) - d->node_i(0) + 1;  // lattice starts one cell outside
        const int j = d->node_j(k) - d->node_j(0) + 1;
        const int m = std::min({i, j, 16 - i, 16 - j});
        CHECK(dist[k] == doctest::Approx(m / 16.0));
        CHECK(layer[k] == m);
    }
}

}  // TEST_SUITE geometry

TEST_SUITE("parse_io") {

TEST_CASE("reals, lists and grids") {
    CHECK(parse_real("1/128") == 1.0 / 128);
    CHECK(parse_real(" 0.25 ") == 0.25);
    CHECK(parse_real("-3/2") == -1.5);
    CHECK_THROWS_AS(parse_real("1/0"), ParseError);
    CHECK_THROWS_AS(parse_real("abc"), ParseError);
    CHECK_THROWS_AS(parse_real(""), ParseError);
    CHECK(parse_real_list("1,3/2,2") == std::vector<double>{1.0, 1.5, 2.0});
    const auto g = parse_grid("1:2:0.05");
    CHECK(g.size() == 21);
    CHECK(g.front() == 1.0);
    CHECK(g.back() == doctest::Approx(2.0).epsilon(1e-14));
    CHECK_THROWS_AS(parse_grid("1:2"), ParseError);
    CHECK_THROWS_AS(parse_grid("1:2:0"), ParseError);
}

TEST_CASE("domain file round trip") {
    auto d = build_polygon(kLShape, 1.0 / 8);
    std::stringstream ss;
    write_domain(ss, *d);
    auto e = read_domain(ss);
    CHECK(e->nx() == d->nx());
    CHECK(e->ny() == d->ny());
    CHECK(e->mask() == d->mask());
    CHECK(e->h() == d->h());
    CHECK(e->convex() == d->convex());
}

TEST_CASE("domain file with comments and reordered header") {
    std::istringstream in("# tiny\nny 4\nconvex 1\nnx 4\norigin 0 0\nh 1/4\n0000\n0110\n0110\n0000\n");
    auto d = read_domain(in);
    CHECK(d->size() == 4);
    CHECK(d->h() == 0.25);
}

TEST_CASE("malformed domain files raise ParseError") {
    const std::string tail = "origin 0 0\nconvex 1\n";
    for (const std::string& text : std::vector<std::string>{
             "nx 3\nny 3\n" + tail + "000\n010\n000\n",                     // no h
                             "h 1\nnx 3\nny 3\n" + tail + "000\n010\n",           // missing row
                             "h 1\nnx 3\nny 3\n" + tail + "000\n0x0\n000\n",     // bad char
                             "h 1\nnx 3\nny 3\n" + tail + "000\n0100\n000\n",    // long row
                             "h 1\nnx 3\nny 3\n" + tail + "010\n000\n000\n",     // interior on rim
                             "h 1\nnx 3\nny 3\norigin 0\nconvex 1\n000\n010\n000\n"}) {  // short origin
        std::istringstream in(text);
        CHECK_THROWS_AS(read_domain(in), ParseError);
    }
    CHECK_THROWS_AS(load_domain_file("/nonexistent/file.dom"), ParseError);
}

TEST_CASE("shape literals") {
    CHECK(parse_domain_spec("disk:r=1", 0.125)->shape().kind == ShapeKind::Disk);
    CHECK(parse_domain_spec("rect:w=2,h=1", 0.125)->size() == 15 * 7);
    CHECK_FALSE(parse_domain_spec("poly:0,0;2,0;2,1;1,1;1,2;0,2", 0.125)->convex());
    CHECK_THROWS_AS(parse_domain_spec("disk:radius=1", 0.125), ParseError);
    CHECK_THROWS_AS(parse_domain_spec("rect:w=1", 0.125), ParseError);
    CHECK_THROWS_AS(parse_domain_spec("disk:r=1", 0.5), ParseError);
}

}  // TEST_SUITE parse_io
