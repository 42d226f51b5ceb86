#include <doctest.h>
#include <omp.h>

#include "margconv/kernels.hpp"
#include "margconv/radon.hpp"
#include "support.hpp"

using namespace margconv;
namespace k = margconv::kernels;

// The parallel kernels must reproduce the serial references, bit for bit where the
// summation order is the same and to round-off where it is not, for any thread count.

TEST_SUITE("kernels") {

TEST_CASE("footprint sinogram") {
    testgen::Gen gen(41);
    const auto f = gen.field(GridSpec::centered(40, 2.0), 0.6);
    const auto thetas = angle_lattice(12);
    const int m = rotation_extent(40);
    const auto ref = k::serial::footprint_sinogram(f, thetas, m);
    for (int threads : {1, 2, 3}) {
        omp_set_num_threads(threads);
        CHECK(k::parallel::footprint_sinogram(f, thetas, m) == ref);
    }
}

TEST_CASE("rotate and resample") {
    testgen::Gen gen(42);
    const auto f = gen.field(GridSpec::centered(32, 2.0));
    for (auto interp : {k::Interp::nearest, k::Interp::bilinear}) {
        const double theta = gen.uniform(0, testgen::kPi);
        CHECK(k::parallel::rotate_resample(f, theta, rotation_extent(32), interp) ==
              k::serial::rotate_resample(f, theta, rotation_extent(32), interp));
    }
    // theta = 0 with nearest sampling reproduces the grid inside the padding.
    const int m = rotation_extent(32), pad = (m - 32) / 2;
    const auto r = k::serial::rotate_resample(f, 0.0, m, k::Interp::nearest);
    for (int i = 0; i < 32; ++i)
        for (int j = 0; j < 32; ++j) CHECK(r[static_cast<std::size_t>(i + pad) * m + j + pad] == f.at(i, j));
}

TEST_CASE("crossing counts") {
    testgen::Gen gen(43);
    auto f = gen.field(GridSpec::centered(48, 2.0), 0.4);
    const auto thetas = angle_lattice(16);
    for (auto interp : {k::Interp::nearest, k::Interp::bilinear})
        CHECK(k::parallel::crossing_counts(f, thetas, rotation_extent(48), 0.5, interp) ==
              k::serial::crossing_counts(f, thetas, rotation_extent(48), 0.5, interp));
}

TEST_CASE("pair energies") {
    testgen::Gen gen(44);
    const auto f = gen.field(GridSpec::centered(24, 1.0));
    const double ref = k::serial::pair_energy_all(f);
    double first = 0.0;
    for (int threads : {1, 2, 4}) {
        omp_set_num_threads(threads);
        const double par = k::parallel::pair_energy_all(f);
        CHECK(par == doctest::Approx(ref).epsilon(1e-12));
        if (threads == 1) first = par;
        CHECK(par == first);
    }
    std::vector<k::CellIndex> cells;
    for (int trial = 0; trial < 150; ++trial) cells.push_back({gen.integer(0, 23), gen.integer(0, 23)});
    std::sort(cells.begin(), cells.end(), [](auto a, auto b) { return a.i != b.i ? a.i < b.i : a.j < b.j; });
    cells.erase(std::unique(cells.begin(), cells.end(), [](auto a, auto b) { return a.i == b.i && a.j == b.j; }),
                cells.end());
    CHECK(k::parallel::pair_energy_subset(f, cells) ==
          doctest::Approx(k::serial::pair_energy_subset(f, cells)).epsilon(1e-12));
}

TEST_CASE("density filter") {
    testgen::Gen gen(45);
    for (int trial = 0; trial < 5; ++trial) {
        const auto g = gen.grid(GridSpec::centered(40, 2.0), gen.uniform(0.3, 0.95));
        for (int radius : {1, 2})
            CHECK(k::parallel::density_filter(g, radius, 0.75).cells == k::serial::density_filter(g, radius, 0.75).cells);
    }
    omp_set_num_threads(omp_get_num_procs());
}

TEST_CASE("a single footprint spreads unit mass") {
    testgen::Gen gen(46);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> row(16, 0.0);
        const double theta = gen.uniform(0, testgen::kPi);
        const double c = std::abs(std::cos(theta)), s = std::abs(std::sin(theta));
        k::detail::spread_footprint(gen.uniform(4, 11), (c + s) / 2, std::abs(c - s) / 2, 1.0, row);
        double sum = 0.0;
        for (double v : row) {
            CHECK(v >= 0.0);
            sum += v;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
    }
}

}
