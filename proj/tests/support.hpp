#pragma once

// Hand-rolled generators for the property tests. Every generator is driven by an explicit
// seed so a failing case can be replayed from the printed seed.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>

#include "margconv/grid.hpp"
#include "margconv/shapes.hpp"

namespace testgen {

inline constexpr double kPi = 3.14159265358979323846;

struct Gen {
    std::mt19937_64 rng;
    explicit Gen(std::uint64_t seed) : rng(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    /// Convex polygon inside the padded interior of a side-2 centred grid.
    margconv::ShapeSpec convex_polygon() {
        const int n = integer(3, 9);
        const double rmin = uniform(0.15, 0.3);
        return margconv::random_convex_polygon(n, rng(), {uniform(-0.1, 0.1), uniform(-0.1, 0.1)}, rmin,
                                               rmin + uniform(0.05, 0.3));
    }

    margconv::ScalarField field(const margconv::GridSpec& spec, double density = 1.0) {
        margconv::ScalarField f(spec);
        for (auto& v : f.values) v = uniform(0.0, 1.0) < density ? uniform(-1.0, 1.0) : 0.0;
        return f;
    }

    margconv::BinaryGrid grid(const margconv::GridSpec& spec, double density) {
        margconv::BinaryGrid g(spec);
        for (auto& c : g.cells) c = uniform(0.0, 1.0) < density ? 1 : 0;
        return g;
    }
};

inline double shoelace(const std::vector<margconv::Point2>& v) {
    double a = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto& p = v[k];
        const auto& q = v[(k + 1) % v.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return std::abs(a) / 2;
}

inline double polygon_length(const std::vector<margconv::Point2>& v) {
    double l = 0.0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const auto& p = v[k];
        const auto& q = v[(k + 1) % v.size()];
        l += std::hypot(q.x - p.x, q.y - p.y);
    }
    return l;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
    auto p = std::filesystem::temp_directory_path() / ("margconv_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testgen
