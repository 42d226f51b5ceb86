#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "margconv/grid.hpp"

// Hot loops, in two flavours with identical signatures:
//   serial::   straightforward reference versions, kept for testing;
//   parallel:: OpenMP versions used by the library.
// Parallel reductions never use `reduction` clauses: each worker fills its own slot of a
// partials array and the partials are summed in index order, so results do not depend on
// the thread count.
//
// Angular lattices share one convention: a marginal sampled at M bins has bin k at
// t_k = (k - (M - 1)/2) h measured from the grid center along e_theta = (cos, sin).

namespace margconv::kernels {

enum class Interp { nearest, bilinear };

struct CellIndex {
    int i = 0;
    int j = 0;
};

namespace serial {

/// thetas.size() x m sinogram. Every cell is spread over the bins as the exact projection
/// of a uniform square (a trapezoid of unit mass), so row masses equal the field mass.
std::vector<double> footprint_sinogram(const ScalarField& f, std::span<const double> thetas, int m);

/// Field rotated by -theta onto an m x m lattice sharing the grid center and spacing:
/// output(p, q) = f(center + t_q e_theta + s_p e_theta_perp). Zero outside the source grid.
std::vector<double> rotate_resample(const ScalarField& f, double theta, int m, Interp interp);

/// Level crossings {f > level} along the rows of the rotated lattice, per angle.
std::vector<std::int64_t> crossing_counts(const ScalarField& f, std::span<const double> thetas, int m, double level,
                                          Interp interp);

/// sum over ordered cell pairs p != q of (u_p - u_q)^2 h^4 / |x_p - x_q|^3.
double pair_energy_all(const ScalarField& f);

/// Same sum restricted to pairs drawn from `cells`.
double pair_energy_subset(const ScalarField& f, std::span<const CellIndex> cells);

/// Keeps occupied cells whose disk stencil of radius `radius` is at least `threshold` full.
BinaryGrid density_filter(const BinaryGrid& g, int radius, double threshold);

}  // namespace serial

namespace parallel {

std::vector<double> footprint_sinogram(const ScalarField& f, std::span<const double> thetas, int m);
std::vector<double> rotate_resample(const ScalarField& f, double theta, int m, Interp interp);
std::vector<std::int64_t> crossing_counts(const ScalarField& f, std::span<const double> thetas, int m, double level,
                                          Interp interp);
double pair_energy_all(const ScalarField& f);
double pair_energy_subset(const ScalarField& f, std::span<const CellIndex> cells);
BinaryGrid density_filter(const BinaryGrid& g, int radius, double threshold);

}  // namespace parallel

namespace detail {

/// Spread one unit-mass cell centred at bin coordinate u over the bins of `row`.
void spread_footprint(double u, double a, double b, double weight, std::span<double> row);

/// Row of the footprint sinogram for one angle; shared by both flavours.
void footprint_row(const ScalarField& f, double theta, std::span<double> row);

/// Rotated sample at output index (p, q); shared by both flavours.
double rotated_sample(const ScalarField& f, double c, double s, int m, int p, int q, Interp interp);

std::int64_t row_crossings(const ScalarField& f, double c, double s, int m, double level, Interp interp);

}  // namespace detail

}  // namespace margconv::kernels
