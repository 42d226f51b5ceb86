#include <doctest.h>

#include <cmath>

#include "margconv/error.hpp"
#include "margconv/geometry.hpp"
#include "support.hpp"

using namespace margconv;

namespace {

BinaryGrid block(int n, int i0, int i1, int j0, int j1) {
    BinaryGrid g(GridSpec::centered(n, 2.0));
    for (int i = i0; i <= i1; ++i)
        for (int j = j0; j <= j1; ++j) g.at(i, j) = 1;
    return g;
}

}  // namespace

TEST_SUITE("geometry") {

TEST_CASE("rasterized area converges to the analytic area") {
    testgen::Gen gen(2024);
    const auto spec = GridSpec::centered(256, 2.0);
    for (int trial = 0; trial < 25; ++trial) {
        const auto shape = gen.convex_polygon();
        const auto grid = rasterize(shape, spec);
        // Centroid sampling misclassifies at most the cells the boundary passes through.
        CHECK(std::abs(grid.area() - *analytic_area(shape)) <= *analytic_perimeter(shape) * spec.h());
    }
}

TEST_CASE("cells are filled exactly when their centre lies in the shape") {
    const auto spec = GridSpec::centered(64, 2.0);
    const ShapeSpec d = Disk{{0.1, 0.05}, 0.4};
    const auto grid = rasterize(d, spec);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            const auto c = spec.cell_center(i, j);
            CHECK((grid.at(i, j) == 1) == (std::hypot(c.x - 0.1, c.y - 0.05) <= 0.4));
        }
}

TEST_CASE("shapes entering the padding band are rejected") {
    const auto spec = GridSpec::centered(128, 2.0);
    CHECK_THROWS_AS(rasterize(Disk{{0, 0}, 0.8}, spec), MarginError);
    CHECK_NOTHROW(rasterize(Disk{{0, 0}, 0.74}, spec));
    CHECK_THROWS_AS(rasterize(SmoothBump{{0, 0}, 0.1, 1.0}, spec), PreconditionError);
}

TEST_CASE("Crofton perimeter of disk and squares") {
    const auto spec = GridSpec::centered(512, 2.0);
    const std::vector<std::pair<const char*, ShapeSpec>> shapes = {
        {"disk", Disk{{0, 0}, 0.3}},
        {"square", Rect{{0, 0}, 0.3, 0.3, 0.0}},
        {"square pi/7", Rect{{0, 0}, 0.3, 0.3, testgen::kPi / 7}}};
    for (const auto& [name, shape] : shapes) {
        CAPTURE(name);
        const double est = crofton_perimeter(rasterize(shape, spec), 64).value;
        CHECK(est == doctest::Approx(*analytic_perimeter(shape)).epsilon(0.02));
    }
}

TEST_CASE("Crofton is rotation robust") {
    const auto spec = GridSpec::centered(512, 2.0);
    const double a = crofton_perimeter(rasterize(Rect{{0, 0}, 0.25, 0.25, 0.0}, spec), 64).value;
    const double b = crofton_perimeter(rasterize(Rect{{0, 0}, 0.25, 0.25, testgen::kPi / 7}, spec), 64).value;
    CHECK(std::abs(a / b - 1) <= 0.05);
}

TEST_CASE("Crofton on an empty grid is zero with a warning") {
    const auto est = crofton_perimeter(BinaryGrid(GridSpec::centered(32, 2.0)), 16);
    CHECK(est.value == 0.0);
    CHECK(est.empty_input);
    CHECK_THROWS_AS(crofton_perimeter(BinaryGrid(GridSpec::centered(32, 2.0)), 8), PreconditionError);
}

TEST_CASE("hull vertices of a block are its corners, counter-clockwise") {
    const auto g = block(16, 4, 9, 5, 11);
    const std::vector<LatticePoint> expected = {{5, 4}, {11, 4}, {11, 9}, {5, 9}};
    CHECK(hull_vertices(g) == expected);
}

TEST_CASE("hull of a rasterized convex set is the set itself") {
    // Lattice points of a convex body: their hull stays inside the body, so it adds nothing.
    testgen::Gen gen(77);
    const auto spec = GridSpec::centered(200, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        const auto grid = rasterize(gen.convex_polygon(), spec);
        CHECK(symmetric_difference(convex_hull(grid), grid) == 0);
    }
}

TEST_CASE("hull of a non-convex set strictly contains it") {
    const auto spec = GridSpec::centered(128, 2.0);
    const auto l = rasterize(make_union(Rect{{-0.2, 0}, 0.15, 0.45, 0}, Rect{{0.1, -0.3}, 0.45, 0.15, 0}), spec);
    const auto hull = convex_hull(l);
    for (std::size_t k = 0; k < l.cells.size(); ++k)
        if (l.cells[k]) CHECK(hull.cells[k] == 1);
    CHECK(hull.count() > l.count() * 13 / 10);
}

TEST_CASE("density filter removes isolated cells and keeps solid interiors") {
    auto g = block(32, 8, 20, 8, 20);
    g.at(2, 2) = 1;
    const auto f = density_one_filter(g, 1, 0.75);
    CHECK(f.at(2, 2) == 0);
    CHECK(f.at(14, 14) == 1);
    CHECK(f.count() <= g.count());
    CHECK_THROWS_AS(density_one_filter(g, 1, 0.4), PreconditionError);
}

TEST_CASE("boundary of an a x b block has 2a + 2b - 4 cells") {
    testgen::Gen gen(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int a = gen.integer(2, 12), b = gen.integer(2, 12);
        const auto g = block(32, 3, 3 + a - 1, 4, 4 + b - 1);
        CHECK(boundary_cells(g).count() == static_cast<std::size_t>(2 * a + 2 * b - 4));
    }
}

}
