#include <algorithm>
#include <cmath>

#include "margconv/error.hpp"
#include "margconv/kernels.hpp"

namespace margconv::kernels {

namespace detail {

namespace {

// CDF of the unit-mass trapezoid with half-support a and plateau half-width b.
double trapezoid_cdf(double x, double a, double b) {
    if (x <= -a) return 0.0;
    if (x >= a) return 1.0;
    if (a - b < 1e-12) return (x + a) / (2 * a);
    const double height = 1.0 / (a + b);
    if (x <= -b) return height * (x + a) * (x + a) / (2 * (a - b));
    if (x <= b) return height * (a - b) / 2 + height * (x + b);
    return 1.0 - height * (a - x) * (a - x) / (2 * (a - b));
}

}  // namespace

void spread_footprint(double u, double a, double b, double weight, std::span<double> row) {
    const int m = static_cast<int>(row.size());
    const int k0 = std::max(0, static_cast<int>(std::ceil(u - a - 0.5)));
    const int k1 = std::min(m - 1, static_cast<int>(std::floor(u + a + 0.5)));
    for (int k = k0; k <= k1; ++k) {
        const double frac = trapezoid_cdf(k + 0.5 - u, a, b) - trapezoid_cdf(k - 0.5 - u, a, b);
        row[k] += weight * frac;
    }
}

void footprint_row(const ScalarField& f, double theta, std::span<double> row) {
    const int n = f.spec.n;
    const int m = static_cast<int>(row.size());
    const double c = std::cos(theta), s = std::sin(theta);
    const double a = (std::abs(c) + std::abs(s)) / 2;
    const double b = std::abs(std::abs(c) - std::abs(s)) / 2;
    const double h = f.spec.h();
    const double mid_n = (n - 1) / 2.0, mid_m = (m - 1) / 2.0;
    std::fill(row.begin(), row.end(), 0.0);
    for (int i = 0; i < n; ++i) {
        const double base = (i - mid_n) * s + mid_m;
        for (int j = 0; j < n; ++j) {
            const double v = f.at(i, j);
            if (v == 0.0) continue;
            spread_footprint(base + (j - mid_n) * c, a, b, v * h, row);
        }
    }
}

double rotated_sample(const ScalarField& f, double c, double s, int m, int p, int q, Interp interp) {
    const int n = f.spec.n;
    const double mid_n = (n - 1) / 2.0, mid_m = (m - 1) / 2.0;
    const double u = q - mid_m, v = p - mid_m;
    const double x = c * u - s * v + mid_n;  // source column
    const double y = s * u + c * v + mid_n;  // source row
    if (interp == Interp::nearest) {
        const int j = static_cast<int>(std::floor(x + 0.5));
        const int i = static_cast<int>(std::floor(y + 0.5));
        if (i < 0 || j < 0 || i >= n || j >= n) return 0.0;
        return f.at(i, j);
    }
    const int j0 = static_cast<int>(std::floor(x));
    const int i0 = static_cast<int>(std::floor(y));
    const double fx = x - j0, fy = y - i0;
    auto get = [&](int i, int j) { return (i < 0 || j < 0 || i >= n || j >= n) ? 0.0 : f.at(i, j); };
    return (1 - fy) * ((1 - fx) * get(i0, j0) + fx * get(i0, j0 + 1)) +
           fy * ((1 - fx) * get(i0 + 1, j0) + fx * get(i0 + 1, j0 + 1));
}

std::int64_t row_crossings(const ScalarField& f, double c, double s, int m, double level, Interp interp) {
    std::int64_t count = 0;
    for (int p = 0; p < m; ++p) {
        bool prev = false;
        for (int q = 0; q < m; ++q) {
            const bool cur = rotated_sample(f, c, s, m, p, q, interp) > level;
            count += cur != prev;
            prev = cur;
        }
        count += prev;  // closing transition at the end of the row
    }
    return count;
}

}  // namespace detail

namespace serial {

std::vector<double> footprint_sinogram(const ScalarField& f, std::span<const double> thetas, int m) {
    std::vector<double> out(thetas.size() * static_cast<std::size_t>(m), 0.0);
    for (std::size_t a = 0; a < thetas.size(); ++a)
        detail::footprint_row(f, thetas[a], std::span<double>(out).subspan(a * m, m));
    return out;
}

std::vector<double> rotate_resample(const ScalarField& f, double theta, int m, Interp interp) {
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> out(static_cast<std::size_t>(m) * m);
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) out[static_cast<std::size_t>(p) * m + q] = detail::rotated_sample(f, c, s, m, p, q, interp);
    return out;
}

std::vector<std::int64_t> crossing_counts(const ScalarField& f, std::span<const double> thetas, int m, double level,
                                          Interp interp) {
    std::vector<std::int64_t> out(thetas.size());
    for (std::size_t a = 0; a < thetas.size(); ++a)
        out[a] = detail::row_crossings(f, std::cos(thetas[a]), std::sin(thetas[a]), m, level, interp);
    return out;
}

double pair_energy_all(const ScalarField& f) {
    const int n = f.spec.n;
    const double h = f.spec.h();
    double total = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l) {
                    if (i == k && j == l) continue;
                    const double d = f.at(i, j) - f.at(k, l);
                    const double dist = h * std::hypot(double(i - k), double(j - l));
                    total += d * d * h * h * h * h / (dist * dist * dist);
                }
    return total;
}

double pair_energy_subset(const ScalarField& f, std::span<const CellIndex> cells) {
    const double h = f.spec.h();
    double total = 0.0;
    for (const auto& p : cells)
        for (const auto& q : cells) {
            if (p.i == q.i && p.j == q.j) continue;
            const double d = f.at(p.i, p.j) - f.at(q.i, q.j);
            const double dist = h * std::hypot(double(p.i - q.i), double(p.j - q.j));
            total += d * d * h * h * h * h / (dist * dist * dist);
        }
    return total;
}

BinaryGrid density_filter(const BinaryGrid& g, int radius, double threshold) {
    const int n = g.spec.n;
    BinaryGrid out(g.spec);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!g.at(i, j)) continue;
            int inside = 0, total = 0;
            for (int di = -radius; di <= radius; ++di)
                for (int dj = -radius; dj <= radius; ++dj) {
                    if (di * di + dj * dj > radius * radius) continue;
                    ++total;
                    const int a = i + di, b = j + dj;
                    if (a >= 0 && b >= 0 && a < n && b < n) inside += g.at(a, b);
                }
            out.at(i, j) = static_cast<double>(inside) >= threshold * total ? 1 : 0;
        }
    return out;
}

}  // namespace serial

}  // namespace margconv::kernels
