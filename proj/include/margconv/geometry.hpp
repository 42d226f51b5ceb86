#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "margconv/grid.hpp"
#include "margconv/shapes.hpp"

namespace margconv {

/// Integer cell coordinates: x = column, y = row.
struct LatticePoint {
    std::int64_t x = 0;
    std::int64_t y = 0;
    bool operator==(const LatticePoint&) const = default;
};

enum class PerimeterMethod { analytic, crofton };

struct PerimeterEstimate {
    double value = 0.0;
    PerimeterMethod method = PerimeterMethod::crofton;
    std::vector<double> thetas;            ///< crofton only
    std::vector<std::int64_t> crossings;   ///< crofton only, one count per angle
    bool empty_input = false;              ///< warning flag: crofton on an empty grid
};

/// Centroid sampling. Throws MarginError when the shape's bounding box enters the L/8 band,
/// PreconditionError when the shape is not a set (SmoothBump).
BinaryGrid rasterize(const ShapeSpec& shape, const GridSpec& spec);

/// Samples `evaluate(shape, .)` at cell centres. Enforces the same margin as rasterize.
ScalarField sample_field(const ShapeSpec& shape, const GridSpec& spec);

/// Throws MarginError unless the box lies inside the padded interior of the grid.
void check_margin(const BoundingBox& box, const GridSpec& spec);

PerimeterEstimate analytic_perimeter_estimate(const ShapeSpec& shape);

/// Cauchy-Crofton estimate (pi/2) h sum_theta crossings(theta) / n_angles. The mask is smoothed
/// at 2h and crossings of the 0.5 level are counted along the rows of the bilinearly rotated
/// lattice; raw 0/1 transitions on a nearest-neighbour rotation overcount by ~10%.
PerimeterEstimate crofton_perimeter(const BinaryGrid& grid, int n_angles);

/// Rasterized convex hull of the occupied cell centres (exact integer arithmetic).
BinaryGrid convex_hull(const BinaryGrid& grid);

/// Hull vertices in counter-clockwise order, as (column, row) cell coordinates.
std::vector<LatticePoint> hull_vertices(const BinaryGrid& grid);

BinaryGrid density_one_filter(const BinaryGrid& grid, int radius_cells, double threshold);

/// Occupied cells with at least one empty 4-neighbour.
BinaryGrid boundary_cells(const BinaryGrid& grid);

/// Number of cells where the two grids differ (same spec required).
std::size_t symmetric_difference(const BinaryGrid& a, const BinaryGrid& b);

std::string to_string(PerimeterMethod m);

}  // namespace margconv
