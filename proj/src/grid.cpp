#include "margconv/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"

namespace margconv {

namespace {

std::string join_violations(const std::vector<std::string>& v) {
    std::ostringstream os;
    os << "invalid configuration (" << v.size() << " violation" << (v.size() == 1 ? "" : "s") << ")";
    for (const auto& s : v) os << "\n  - " << s;
    return os.str();
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> violations)
    : Error(join_violations(violations)), violations_(std::move(violations)) {}

GridSpec GridSpec::centered(int n, double side) {
    GridSpec s{n, side, {-side / 2, -side / 2}};
    s.validate();
    return s;
}

double GridSpec::padding() const noexcept { return side * constants::kPaddingFraction; }

void GridSpec::validate() const {
    if (n < 8) throw PreconditionError("grid resolution N must be >= 8, got " + std::to_string(n));
    if (!(side > 0.0) || !std::isfinite(side))
        throw PreconditionError("grid side length L must be positive and finite");
    if (!std::isfinite(origin.x) || !std::isfinite(origin.y))
        throw PreconditionError("grid origin must be finite");
}

std::size_t BinaryGrid::count() const noexcept {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), std::uint8_t{1}));
}

double BinaryGrid::boundary_clearance() const noexcept {
    const int n = spec.n;
    int lo_i = n, hi_i = -1, lo_j = n, hi_j = -1;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (at(i, j)) {
                lo_i = std::min(lo_i, i);
                hi_i = std::max(hi_i, i);
                lo_j = std::min(lo_j, j);
                hi_j = std::max(hi_j, j);
            }
    if (hi_i < 0) return std::numeric_limits<double>::infinity();
    const int cells_away = std::min({lo_i, lo_j, n - 1 - hi_i, n - 1 - hi_j});
    return (cells_away + 0.5) * spec.h();
}

std::string to_string(Provenance p) {
    switch (p) {
        case Provenance::indicator: return "indicator";
        case Provenance::mollified: return "mollified";
        case Provenance::synthetic: return "synthetic";
    }
    return "synthetic";
}

double ScalarField::mass() const noexcept {
    double s = 0.0;
    for (double v : values) s += v;
    return s * spec.h() * spec.h();
}

double ScalarField::sample(Point2 p) const noexcept {
    const double h = spec.h();
    const double u = (p.x - spec.origin.x) / h - 0.5;
    const double v = (p.y - spec.origin.y) / h - 0.5;
    const int j0 = static_cast<int>(std::floor(u));
    const int i0 = static_cast<int>(std::floor(v));
    const double fu = u - j0, fv = v - i0;
    auto get = [&](int i, int j) {
        return (i < 0 || j < 0 || i >= spec.n || j >= spec.n) ? 0.0 : at(i, j);
    };
    return (1 - fv) * ((1 - fu) * get(i0, j0) + fu * get(i0, j0 + 1)) +
           fv * ((1 - fu) * get(i0 + 1, j0) + fu * get(i0 + 1, j0 + 1));
}

ScalarField to_field(const BinaryGrid& grid) {
    ScalarField f(grid.spec, Provenance::indicator);
    std::transform(grid.cells.begin(), grid.cells.end(), f.values.begin(),
                   [](std::uint8_t c) { return static_cast<double>(c); });
    return f;
}

int rotation_extent(int n) {
    // ceil((sqrt2 - 1) n / 2) cells of slack per side plus two guard bins for footprints.
    const int pad = static_cast<int>(std::ceil((std::sqrt(2.0) - 1.0) * n / 2.0)) + 2;
    return n + 2 * pad;
}

double Profile1D::mass() const noexcept {
    double s = 0.0;
    for (double v : values) s += v;
    return s * dt;
}

}  // namespace margconv
