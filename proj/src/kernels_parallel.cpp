#include <algorithm>
#include <cmath>
#include <numeric>

#include "margconv/kernels.hpp"

namespace margconv::kernels::parallel {

namespace {

double ordered_sum(const std::vector<double>& partials) {
    double s = 0.0;
    for (double v : partials) s += v;
    return s;
}

}  // namespace

std::vector<double> footprint_sinogram(const ScalarField& f, std::span<const double> thetas, int m) {
    std::vector<double> out(thetas.size() * static_cast<std::size_t>(m), 0.0);
    const auto count = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t a = 0; a < count; ++a)
        detail::footprint_row(f, thetas[a], std::span<double>(out).subspan(static_cast<std::size_t>(a) * m, m));
    return out;
}

std::vector<double> rotate_resample(const ScalarField& f, double theta, int m, Interp interp) {
    const double c = std::cos(theta), s = std::sin(theta);
    std::vector<double> out(static_cast<std::size_t>(m) * m);
#pragma omp parallel for schedule(static)
    for (int p = 0; p < m; ++p)
        for (int q = 0; q < m; ++q) out[static_cast<std::size_t>(p) * m + q] = detail::rotated_sample(f, c, s, m, p, q, interp);
    return out;
}

std::vector<std::int64_t> crossing_counts(const ScalarField& f, std::span<const double> thetas, int m, double level,
                                          Interp interp) {
    std::vector<std::int64_t> out(thetas.size());
    const auto count = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t a = 0; a < count; ++a)
        out[a] = detail::row_crossings(f, std::cos(thetas[a]), std::sin(thetas[a]), m, level, interp);
    return out;
}

// Offset form: for each lattice offset (di, dj) != 0 the weight h / |(di, dj)|^3 is shared by
// every pair with that offset, so the O(N^4) sum costs one multiply per pair.
double pair_energy_all(const ScalarField& f) {
    const int n = f.spec.n;
    const double h = f.spec.h();
    std::vector<double> partials(2 * n - 1, 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int di = -(n - 1); di <= n - 1; ++di) {
        double acc_di = 0.0;
        const int i_lo = std::max(0, -di), i_hi = std::min(n, n - di);
        for (int dj = -(n - 1); dj <= n - 1; ++dj) {
            if (di == 0 && dj == 0) continue;
            const int j_lo = std::max(0, -dj), j_hi = std::min(n, n - dj);
            double acc = 0.0;
            for (int i = i_lo; i < i_hi; ++i) {
                const double* a = &f.values[static_cast<std::size_t>(i) * n];
                const double* b = &f.values[static_cast<std::size_t>(i + di) * n + dj];
                for (int j = j_lo; j < j_hi; ++j) {
                    const double d = a[j] - b[j];
                    acc += d * d;
                }
            }
            const double r2 = double(di) * di + double(dj) * dj;
            acc_di += acc * h / (r2 * std::sqrt(r2));
        }
        partials[di + n - 1] = acc_di;
    }
    return ordered_sum(partials);
}

double pair_energy_subset(const ScalarField& f, std::span<const CellIndex> cells) {
    const double h = f.spec.h();
    const auto count = static_cast<std::ptrdiff_t>(cells.size());
    if (count == 0) return 0.0;
    std::vector<double> values(cells.size());
    int i_lo = cells[0].i, i_hi = cells[0].i, j_lo = cells[0].j, j_hi = cells[0].j;
    for (std::size_t k = 0; k < cells.size(); ++k) {
        values[k] = f.at(cells[k].i, cells[k].j);
        i_lo = std::min(i_lo, cells[k].i);
        i_hi = std::max(i_hi, cells[k].i);
        j_lo = std::min(j_lo, cells[k].j);
        j_hi = std::max(j_hi, cells[k].j);
    }
    // 1 / r^3 for every offset the subset can produce.
    const int ri = i_hi - i_lo, rj = j_hi - j_lo;
    const int wi = 2 * ri + 1, wj = 2 * rj + 1;
    std::vector<double> inv_r3(static_cast<std::size_t>(wi) * wj, 0.0);
    for (int di = -ri; di <= ri; ++di)
        for (int dj = -rj; dj <= rj; ++dj) {
            if (di == 0 && dj == 0) continue;
            const double r2 = double(di) * di + double(dj) * dj;
            inv_r3[static_cast<std::size_t>(di + ri) * wj + (dj + rj)] = 1.0 / (r2 * std::sqrt(r2));
        }
    std::vector<double> partials(cells.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 64)
    for (std::ptrdiff_t p = 0; p < count; ++p) {
        double acc = 0.0;
        const double vp = values[p];
        const int ip = cells[p].i + ri, jp = cells[p].j + rj;
        for (std::ptrdiff_t q = 0; q < count; ++q) {
            const double d = vp - values[q];
            acc += d * d * inv_r3[static_cast<std::size_t>(ip - cells[q].i) * wj + (jp - cells[q].j)];
        }
        partials[p] = acc * h;
    }
    return ordered_sum(partials);
}

BinaryGrid density_filter(const BinaryGrid& g, int radius, double threshold) {
    const int n = g.spec.n;
    std::vector<std::pair<int, int>> stencil;
    for (int di = -radius; di <= radius; ++di)
        for (int dj = -radius; dj <= radius; ++dj)
            if (di * di + dj * dj <= radius * radius) stencil.emplace_back(di, dj);
    const double need = threshold * static_cast<double>(stencil.size());
    BinaryGrid out(g.spec);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            if (!g.at(i, j)) continue;
            int inside = 0;
            for (const auto& [di, dj] : stencil) {
                const int a = i + di, b = j + dj;
                if (a >= 0 && b >= 0 && a < n && b < n) inside += g.at(a, b);
            }
            out.at(i, j) = static_cast<double>(inside) >= need ? 1 : 0;
        }
    return out;
}

}  // namespace margconv::kernels::parallel
