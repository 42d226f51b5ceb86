#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace margconv {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point2&) const = default;
};

/// Uniform N x N square lattice covering [origin.x, origin.x + L] x [origin.y, origin.y + L].
///
/// Cell (i, j) is row i (y direction, bottom to top) and column j (x direction);
/// its center is origin + ((j + 1/2) h, (i + 1/2) h). Storage is row-major.
struct GridSpec {
    int n = 0;
    double side = 0.0;
    Point2 origin{};

    static GridSpec centered(int n, double side);

    double h() const noexcept { return side / n; }
    double padding() const noexcept;
    Point2 center() const noexcept { return {origin.x + side / 2, origin.y + side / 2}; }
    Point2 cell_center(int i, int j) const noexcept {
        return {origin.x + (j + 0.5) * h(), origin.y + (i + 0.5) * h()};
    }
    std::size_t cells() const noexcept { return static_cast<std::size_t>(n) * n; }

    /// Throws PreconditionError when N < 8 or L <= 0.
    void validate() const;

    bool operator==(const GridSpec&) const = default;
};

/// Rasterized indicator 1_E: a cell is 1 when its center lies in E.
struct BinaryGrid {
    GridSpec spec;
    std::vector<std::uint8_t> cells;

    BinaryGrid() = default;
    explicit BinaryGrid(const GridSpec& s) : spec(s), cells(s.cells(), 0) {}

    std::uint8_t at(int i, int j) const { return cells[static_cast<std::size_t>(i) * spec.n + j]; }
    std::uint8_t& at(int i, int j) { return cells[static_cast<std::size_t>(i) * spec.n + j]; }

    std::size_t count() const noexcept;
    double area() const noexcept { return static_cast<double>(count()) * spec.h() * spec.h(); }
    bool empty() const noexcept { return count() == 0; }

    /// Smallest distance between an occupied cell center and the grid boundary (+inf if empty).
    double boundary_clearance() const noexcept;
};

enum class Provenance { indicator, mollified, synthetic };

std::string to_string(Provenance p);

/// Real-valued grid function.
struct ScalarField {
    GridSpec spec;
    std::vector<double> values;
    Provenance provenance = Provenance::synthetic;
    double epsilon = 0.0;  ///< mollification scale when provenance == mollified

    ScalarField() = default;
    explicit ScalarField(const GridSpec& s, Provenance p = Provenance::synthetic)
        : spec(s), values(s.cells(), 0.0), provenance(p) {}

    double at(int i, int j) const { return values[static_cast<std::size_t>(i) * spec.n + j]; }
    double& at(int i, int j) { return values[static_cast<std::size_t>(i) * spec.n + j]; }

    double mass() const noexcept;
    /// Bilinear interpolation at a plane point; zero outside the lattice of cell centers.
    double sample(Point2 p) const noexcept;
};

ScalarField to_field(const BinaryGrid& grid);

/// Side of the square lattice that holds any rotation of an N x N grid, and the bin count
/// of every marginal. M - N is even, so at theta = 0 the bins line up with the grid columns.
int rotation_extent(int n);

/// Uniformly sampled 1D profile: values[k] is the sample at t0 + k * dt.
struct Profile1D {
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> values;

    std::size_t size() const noexcept { return values.size(); }
    double t(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    double mass() const noexcept;
};

}  // namespace margconv
