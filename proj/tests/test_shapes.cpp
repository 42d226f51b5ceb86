#include <doctest.h>

#include "margconv/error.hpp"
#include "margconv/shapes.hpp"
#include "support.hpp"

using namespace margconv;

TEST_SUITE("shapes") {

TEST_CASE("disk membership is boundary inclusive") {
    const ShapeSpec d = Disk{{0.1, -0.2}, 0.25};
    CHECK(contains(d, {0.1, -0.2}));
    CHECK(contains(d, {0.35, -0.2}));
    CHECK_FALSE(contains(d, {0.36, -0.2}));
}

TEST_CASE("rotating an axis-aligned rect equals setting its angle") {
    const ShapeSpec a = rotated(Rect{{0, 0}, 0.3, 0.1, 0.0}, 0.7);
    const ShapeSpec b = Rect{{0, 0}, 0.3, 0.1, 0.7};
    testgen::Gen g(11);
    for (int k = 0; k < 2000; ++k) {
        const Point2 p{g.uniform(-0.4, 0.4), g.uniform(-0.4, 0.4)};
        CHECK(contains(a, p) == contains(b, p));
    }
}

TEST_CASE("difference and union membership") {
    const auto holed = make_difference(Disk{{0, 0}, 0.4}, Disk{{0, 0}, 0.1});
    CHECK_FALSE(contains(holed, {0, 0}));
    CHECK(contains(holed, {0.2, 0}));
    const auto two = make_union(Disk{{-0.3, 0}, 0.1}, Disk{{0.3, 0}, 0.1});
    CHECK(contains(two, {0.3, 0.05}));
    CHECK_FALSE(contains(two, {0, 0}));
    CHECK_FALSE(is_set(make_union(Disk{{0, 0}, 0.1}, SmoothBump{{0, 0}, 0.1, 1.0})));
}

TEST_CASE("closed-form area and perimeter") {
    CHECK(*analytic_area(Disk{{0, 0}, 0.5}) == doctest::Approx(testgen::kPi * 0.25));
    CHECK(*analytic_perimeter(Rect{{0, 0}, 0.3, 0.2, 1.0}) == doctest::Approx(2.0));
    CHECK_FALSE(analytic_area(make_difference(Disk{{0, 0}, 0.4}, Disk{{0, 0}, 0.1})).has_value());
}

TEST_CASE("random polygons are convex, deterministic and match the shoelace area") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const int n = 3 + static_cast<int>(seed % 10);
        const auto a = random_convex_polygon(n, seed, {0.05, -0.02}, 0.2, 0.5);
        const auto b = random_convex_polygon(n, seed, {0.05, -0.02}, 0.2, 0.5);
        const auto& va = std::get<ConvexPolygon>(a.node).vertices;
        const auto& vb = std::get<ConvexPolygon>(b.node).vertices;
        REQUIRE(va.size() == static_cast<std::size_t>(n));
        CHECK(va == vb);
        int sign = 0;
        for (std::size_t k = 0; k < va.size(); ++k) {
            const auto& p = va[k];
            const auto& q = va[(k + 1) % va.size()];
            const auto& r = va[(k + 2) % va.size()];
            const double cross = (q.x - p.x) * (r.y - q.y) - (q.y - p.y) * (r.x - q.x);
            const int s = cross > 0 ? 1 : -1;
            if (sign == 0) sign = s;
            CHECK(s == sign);
        }
        CHECK(*analytic_area(a) == doctest::Approx(testgen::shoelace(va)));
        CHECK(*analytic_perimeter(a) == doctest::Approx(testgen::polygon_length(va)));
        CHECK_NOTHROW(validate(a));
    }
}

TEST_CASE("validation rejects degenerate shapes") {
    CHECK_THROWS_AS(validate(Disk{{0, 0}, -1.0}), PreconditionError);
    CHECK_THROWS_AS(validate(Rect{{0, 0}, 0.0, 0.1, 0.0}), PreconditionError);
    CHECK_THROWS_AS(validate(ConvexPolygon{{{0, 0}, {1, 0}, {0.5, 0.1}, {0.5, 1}, {0.6, 0.2}}}), PreconditionError);
}

TEST_CASE("JSON round trip") {
    const auto shape = make_difference(Rect{{0.1, 0}, 0.3, 0.2, 0.4},
                                       make_union(Disk{{0, 0}, 0.05}, ConvexPolygon{{{0, 0}, {0.1, 0}, {0, 0.1}}}));
    const auto doc = shape_to_json(shape);
    CHECK(shape_to_json(shape_from_json(doc)) == doc);
    CHECK_THROWS_AS(shape_from_json(nlohmann::json{{"type", "ellipse"}}), ParseError);
    CHECK_THROWS_AS(shape_from_json(nlohmann::json{{"type", "disk"}, {"center", {0, 0}}}), ParseError);
}

TEST_CASE("random_polygon nodes resolve with the supplied seed") {
    const nlohmann::json doc{{"type", "random_polygon"}, {"vertices", 6}};
    CHECK(shape_to_json(shape_from_json(doc, 5)) == shape_to_json(shape_from_json(doc, 5)));
    CHECK(shape_to_json(shape_from_json(doc, 5)) != shape_to_json(shape_from_json(doc, 6)));
}

}
