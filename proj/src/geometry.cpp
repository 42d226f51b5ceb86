#include "margconv/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"
#include "margconv/kernels.hpp"
#include "margconv/mollify.hpp"

namespace margconv {

namespace {

std::int64_t cross(const LatticePoint& o, const LatticePoint& a, const LatticePoint& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

}  // namespace

void check_margin(const BoundingBox& box, const GridSpec& spec) {
    const double pad = spec.padding();
    const double lo_x = spec.origin.x + pad, hi_x = spec.origin.x + spec.side - pad;
    const double lo_y = spec.origin.y + pad, hi_y = spec.origin.y + spec.side - pad;
    const double clearance = std::min({box.lo.x - spec.origin.x, box.lo.y - spec.origin.y,
                                       spec.origin.x + spec.side - box.hi.x, spec.origin.y + spec.side - box.hi.y});
    if (box.lo.x < lo_x || box.lo.y < lo_y || box.hi.x > hi_x || box.hi.y > hi_y) {
        std::ostringstream os;
        os << "shape exceeds the padding margin: bounding box [" << box.lo.x << ", " << box.hi.x << "] x ["
           << box.lo.y << ", " << box.hi.y << "] is " << clearance << " from the grid boundary, required margin L/8 = "
           << pad;
        throw MarginError(os.str());
    }
}

BinaryGrid rasterize(const ShapeSpec& shape, const GridSpec& spec) {
    spec.validate();
    validate(shape);
    if (!is_set(shape)) throw PreconditionError("rasterize: SmoothBump is a function; use sample_field");
    check_margin(bounds(shape), spec);
    BinaryGrid g(spec);
    const int n = spec.n;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g.at(i, j) = contains(shape, spec.cell_center(i, j)) ? 1 : 0;
    return g;
}

ScalarField sample_field(const ShapeSpec& shape, const GridSpec& spec) {
    spec.validate();
    validate(shape);
    check_margin(bounds(shape), spec);
    ScalarField f(spec, Provenance::synthetic);
    const int n = spec.n;
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) f.at(i, j) = evaluate(shape, spec.cell_center(i, j));
    return f;
}

PerimeterEstimate analytic_perimeter_estimate(const ShapeSpec& shape) {
    const auto p = analytic_perimeter(shape);
    if (!p) throw PreconditionError("no closed-form perimeter for this shape");
    PerimeterEstimate e;
    e.value = *p;
    e.method = PerimeterMethod::analytic;
    return e;
}

PerimeterEstimate crofton_perimeter(const BinaryGrid& grid, int n_angles) {
    if (n_angles < 16) throw PreconditionError("crofton_perimeter needs n_angles >= 16");
    PerimeterEstimate e;
    e.method = PerimeterMethod::crofton;
    for (int a = 0; a < n_angles; ++a) e.thetas.push_back(constants::kPi * a / n_angles);
    if (grid.empty()) {
        e.crossings.assign(n_angles, 0);
        e.empty_input = true;
        return e;
    }
    const auto smooth = mollify2d(to_field(grid), constants::kMinEpsilonCells * grid.spec.h());
    e.crossings = kernels::parallel::crossing_counts(smooth, e.thetas, rotation_extent(grid.spec.n), 0.5,
                                                     kernels::Interp::bilinear);
    std::int64_t total = 0;
    for (auto c : e.crossings) total += c;
    e.value = constants::kPi / 2 * grid.spec.h() * static_cast<double>(total) / n_angles;
    return e;
}

std::vector<LatticePoint> hull_vertices(const BinaryGrid& grid) {
    const int n = grid.spec.n;
    // Only the extreme cells of each row can be hull vertices.
    std::vector<LatticePoint> pts;
    for (int i = 0; i < n; ++i) {
        int lo = -1, hi = -1;
        for (int j = 0; j < n; ++j)
            if (grid.at(i, j)) {
                if (lo < 0) lo = j;
                hi = j;
            }
        if (lo < 0) continue;
        pts.push_back({lo, i});
        if (hi != lo) pts.push_back({hi, i});
    }
    std::sort(pts.begin(), pts.end(),
              [](const LatticePoint& a, const LatticePoint& b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    if (pts.size() < 3) return pts;
    // Andrew's monotone chain; collinear points are dropped, keeping extreme points only.
    std::vector<LatticePoint> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        const auto& p = pts[i];
        while (k >= t && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    hull.resize(k - 1);
    return hull;
}

BinaryGrid convex_hull(const BinaryGrid& grid) {
    BinaryGrid out(grid.spec);
    const auto hull = hull_vertices(grid);
    if (hull.empty()) return out;
    std::int64_t x_lo = hull[0].x, x_hi = hull[0].x, y_lo = hull[0].y, y_hi = hull[0].y;
    for (const auto& p : hull) {
        x_lo = std::min(x_lo, p.x);
        x_hi = std::max(x_hi, p.x);
        y_lo = std::min(y_lo, p.y);
        y_hi = std::max(y_hi, p.y);
    }
    const std::size_t nv = hull.size();
    for (std::int64_t i = y_lo; i <= y_hi; ++i) {
        std::int64_t lo = x_lo, hi = x_hi;
        // Each CCW edge o -> a keeps cross(o, a, (j, i)) >= 0, i.e. A j + B >= 0.
        for (std::size_t e = 0; e < nv && lo <= hi; ++e) {
            const auto& o = hull[e];
            const auto& a = hull[(e + 1) % nv];
            if (o == a) continue;
            const std::int64_t A = -(a.y - o.y);
            const std::int64_t B = (a.x - o.x) * (i - o.y) + (a.y - o.y) * o.x;
            if (A > 0)
                lo = std::max(lo, ceil_div(-B, A));
            else if (A < 0)
                hi = std::min(hi, floor_div(B, -A));
            else if (B < 0)
                hi = lo - 1;
        }
        for (std::int64_t j = lo; j <= hi; ++j) out.at(static_cast<int>(i), static_cast<int>(j)) = 1;
    }
    return out;
}

BinaryGrid density_one_filter(const BinaryGrid& grid, int radius_cells, double threshold) {
    if (radius_cells < 1) throw PreconditionError("density_one_filter needs radius_cells >= 1");
    if (!(threshold > 0.5 && threshold <= 1.0)) throw PreconditionError("density_one_filter needs threshold in (0.5, 1]");
    return kernels::parallel::density_filter(grid, radius_cells, threshold);
}

BinaryGrid boundary_cells(const BinaryGrid& grid) {
    const int n = grid.spec.n;
    BinaryGrid out(grid.spec);
    auto occ = [&](int i, int j) { return i >= 0 && j >= 0 && i < n && j < n && grid.at(i, j); };
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (grid.at(i, j) && !(occ(i - 1, j) && occ(i + 1, j) && occ(i, j - 1) && occ(i, j + 1))) out.at(i, j) = 1;
    return out;
}

std::size_t symmetric_difference(const BinaryGrid& a, const BinaryGrid& b) {
    if (!(a.spec == b.spec)) throw PreconditionError("symmetric_difference: grids have different specs");
    std::size_t d = 0;
    for (std::size_t k = 0; k < a.cells.size(); ++k) d += a.cells[k] != b.cells[k];
    return d;
}

std::string to_string(PerimeterMethod m) { return m == PerimeterMethod::analytic ? "analytic" : "crofton"; }

}  // namespace margconv
