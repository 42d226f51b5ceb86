#include <doctest.h>

#include <cmath>

#include "margconv/error.hpp"
#include "margconv/geometry.hpp"
#include "margconv/mollify.hpp"
#include "support.hpp"

using namespace margconv;

TEST_SUITE("mollify") {

TEST_CASE("1D kernel: unit mass, centred, variance eps^2") {
    for (double eps : {0.01, 0.03, 0.1}) {
        const double dt = eps / 4;
        const auto k = gaussian_kernel_1d(eps, dt, 401);
        double mass = 0, first = 0, second = 0;
        for (std::size_t i = 0; i < k.size(); ++i) {
            mass += k.values[i] * dt;
            first += k.t(i) * k.values[i] * dt;
            second += k.t(i) * k.t(i) * k.values[i] * dt;
        }
        CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(first) < 1e-12);
        CHECK(second == doctest::Approx(eps * eps).epsilon(1e-6));
    }
}

TEST_CASE("2D kernel is the outer product of the 1D kernel") {
    const auto spec = GridSpec::centered(64, 2.0);
    const double eps = 0.1;
    const auto k2 = gaussian_kernel_2d(eps, spec);
    const auto k1 = gaussian_kernel_1d(eps, spec.h(), spec.n);
    CHECK(k2.mass() == doctest::Approx(1.0).epsilon(1e-12));
    for (int i = 0; i < spec.n; i += 7)
        for (int j = 0; j < spec.n; j += 5) CHECK(k2.at(i, j) == doctest::Approx(k1.values[i] * k1.values[j]));
}

TEST_CASE("mollify1d of a box matches the erf profile") {
    const double dt = 1e-3, a = 0.2, eps = 0.02;
    Profile1D box{dt, -0.5, std::vector<double>(1001, 0.0)};
    for (std::size_t k = 0; k < box.size(); ++k)
        if (std::abs(box.t(k)) <= a) box.values[k] = 1.0;
    const auto out = mollify1d(box, eps);
    double worst = 0.0;
    for (std::size_t k = 0; k < out.size(); ++k) {
        const double t = out.t(k);
        const double exact = 0.5 * (std::erf((t + a) / (std::sqrt(2.0) * eps)) - std::erf((t - a) / (std::sqrt(2.0) * eps)));
        worst = std::max(worst, std::abs(out.values[k] - exact));
    }
    CHECK(worst < 1e-2);
    CHECK(out.mass() == doctest::Approx(box.mass()).epsilon(1e-12));
}

TEST_CASE("mollify2d preserves mass and stays within [0, 1] for indicators") {
    testgen::Gen gen(8);
    const auto spec = GridSpec::centered(128, 2.0);
    for (int trial = 0; trial < 5; ++trial) {
        const auto grid = rasterize(gen.convex_polygon(), spec);
        const auto f = mollify2d(grid, gen.uniform(2 * spec.h(), 0.1));
        CHECK(f.mass() == doctest::Approx(grid.area()).epsilon(1e-10));
        for (double v : f.values) {
            CHECK(v > -1e-12);
            CHECK(v < 1 + 1e-12);
        }
        CHECK(f.provenance == Provenance::mollified);
    }
}

TEST_CASE("mollify2d of a Gaussian adds variances") {
    // gamma_s * gamma_eps = gamma_sqrt(s^2 + eps^2): a closed-form oracle.
    const auto spec = GridSpec::centered(256, 2.0);
    const double s = 0.05, eps = 0.04, t = std::hypot(s, eps);
    ScalarField f(spec);
    const auto c = spec.center();
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            const auto p = spec.cell_center(i, j);
            const double r2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
            f.at(i, j) = std::exp(-r2 / (2 * s * s)) / (2 * testgen::kPi * s * s);
        }
    const auto out = mollify2d(f, eps);
    double worst = 0.0, peak = 0.0;
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) {
            const auto p = spec.cell_center(i, j);
            const double r2 = (p.x - c.x) * (p.x - c.x) + (p.y - c.y) * (p.y - c.y);
            const double exact = std::exp(-r2 / (2 * t * t)) / (2 * testgen::kPi * t * t);
            worst = std::max(worst, std::abs(out.at(i, j) - exact));
            peak = std::max(peak, exact);
        }
    CHECK(worst / peak < 1e-3);
}

TEST_CASE("scales below 2h are refused with the minimum admissible scale") {
    const auto spec = GridSpec::centered(128, 2.0);
    const auto grid = rasterize(Disk{{0, 0}, 0.3}, spec);
    try {
        (void)mollify2d(grid, 1.5 * spec.h());
        FAIL("expected ResolutionError");
    } catch (const ResolutionError& e) {
        CHECK(e.min_epsilon() == doctest::Approx(2 * spec.h()));
    }
    CHECK_NOTHROW(mollify2d(grid, 2 * spec.h()));
}

TEST_CASE("schedules") {
    const auto s = geometric_schedule(0.1, 0.5, 4);
    REQUIRE(s.size() == 4);
    CHECK(s[3] == doctest::Approx(0.0125));
    const auto d = schedule_down_to(0.0625, std::sqrt(0.5), 4 * 2.0 / 1024);
    CHECK(d.size() == 7);
    CHECK(d.back() == doctest::Approx(4 * 2.0 / 1024));
    const auto def = default_schedule(GridSpec::centered(1024, 2.0));
    CHECK(def.front() == doctest::Approx(2.0 / 32));
    CHECK(def.back() >= 2 * 2.0 / 1024 * (1 - 1e-9));
}

}
