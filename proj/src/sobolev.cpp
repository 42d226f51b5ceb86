#include "margconv/sobolev.hpp"

#include <cmath>
#include <exception>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"
#include "margconv/fft.hpp"
#include "margconv/kernels.hpp"
#include "margconv/mollify.hpp"

namespace margconv {

std::string to_string(EnergyMethod m) {
    switch (m) {
        case EnergyMethod::spectral: return "spectral";
        case EnergyMethod::direct: return "direct";
        case EnergyMethod::localized: return "localized";
    }
    return "spectral";
}

double spectral_energy_raw(const ScalarField& field) {
    const int n = field.spec.n;
    const double h = field.spec.h();
    const double dxi = 2 * constants::kPi / field.spec.side;
    const auto spec = fft::r2c_2d(n, n, field.values);
    const int half = n / 2 + 1;
    std::vector<double> rows(n, 0.0);
    for (int i = 0; i < n; ++i) {
        const int ki = i <= n / 2 ? i : i - n;
        double acc = 0.0;
        for (int j = 0; j < half; ++j) {
            if (i == 0 && j == 0) continue;
            // Columns strictly between 0 and n/2 stand for their conjugate mirror as well.
            const double w = (j == 0 || (n % 2 == 0 && j == n / 2)) ? 1.0 : 2.0;
            const double xi = dxi * std::hypot(double(ki), double(j));
            acc += w * xi * std::norm(spec[static_cast<std::size_t>(i) * half + j]);
        }
        rows[i] = acc;
    }
    double total = 0.0;
    for (double r : rows) total += r;
    return total * h * h * h * h * dxi * dxi;
}

EnergyValue h_half_spectral(const ScalarField& field) {
    EnergyValue e;
    e.value = constants::kCalibrationC.value * spectral_energy_raw(field);
    e.method = EnergyMethod::spectral;
    e.epsilon = field.epsilon;
    return e;
}

EnergyValue h_half_direct(const ScalarField& field) {
    if (field.spec.n > constants::kDirectMaxN) {
        std::ostringstream os;
        os << "h_half_direct is an O(N^4) oracle limited to N <= " << constants::kDirectMaxN << "; got N = "
           << field.spec.n;
        throw CostGuardError(os.str());
    }
    EnergyValue e;
    e.value = kernels::parallel::pair_energy_all(field);
    e.method = EnergyMethod::direct;
    e.epsilon = field.epsilon;
    return e;
}

EnergyValue localized_energy(const ScalarField& field, Point2 x0, double r0, double epsilon) {
    const auto& s = field.spec;
    if (!(epsilon > 0 && epsilon < 1)) throw PreconditionError("localized_energy needs 0 < eps < 1");
    if (r0 < 10 * epsilon * (1 - 1e-12)) throw PreconditionError("localized_energy needs r0 >= 10 eps");
    if (x0.x - r0 < s.origin.x || x0.y - r0 < s.origin.y || x0.x + r0 > s.origin.x + s.side ||
        x0.y + r0 > s.origin.y + s.side)
        throw PreconditionError("localized_energy: ball B_r0(x0) leaves the grid");
    const double h = s.h();
    const int j_lo = std::max(0, static_cast<int>(std::floor((x0.x - r0 - s.origin.x) / h)));
    const int j_hi = std::min(s.n - 1, static_cast<int>(std::ceil((x0.x + r0 - s.origin.x) / h)));
    const int i_lo = std::max(0, static_cast<int>(std::floor((x0.y - r0 - s.origin.y) / h)));
    const int i_hi = std::min(s.n - 1, static_cast<int>(std::ceil((x0.y + r0 - s.origin.y) / h)));
    std::vector<kernels::CellIndex> cells;
    for (int i = i_lo; i <= i_hi; ++i)
        for (int j = j_lo; j <= j_hi; ++j) {
            const auto c = s.cell_center(i, j);
            if ((c.x - x0.x) * (c.x - x0.x) + (c.y - x0.y) * (c.y - x0.y) <= r0 * r0) cells.push_back({i, j});
        }
    EnergyValue e;
    e.value = kernels::parallel::pair_energy_subset(field, cells) / std::abs(std::log(epsilon));
    e.method = EnergyMethod::localized;
    e.epsilon = epsilon;
    e.center = x0;
    e.radius = r0;
    return e;
}

void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept,
              double& r2) {
    const std::size_t n = x.size();
    double mx = 0, my = 0;
    for (std::size_t k = 0; k < n; ++k) {
        mx += x[k];
        my += y[k];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t k = 0; k < n; ++k) {
        sxx += (x[k] - mx) * (x[k] - mx);
        sxy += (x[k] - mx) * (y[k] - my);
        syy += (y[k] - my) * (y[k] - my);
    }
    slope = sxx > 0 ? sxy / sxx : 0.0;
    intercept = my - slope * mx;
    double ss_res = 0;
    for (std::size_t k = 0; k < n; ++k) {
        const double r = y[k] - (slope * x[k] + intercept);
        ss_res += r * r;
    }
    r2 = syy > 0 ? 1.0 - ss_res / syy : 0.0;
}

ScalingFit perimeter_by_scaling(const BinaryGrid& grid, const std::vector<double>& schedule) {
    if (schedule.size() < 4) throw PreconditionError("perimeter_by_scaling needs a schedule of length >= 4");
    for (double e : schedule) check_resolvable(e, grid.spec.h());
    ScalingFit fit;
    fit.points.resize(schedule.size());
    // One scale per worker; each writes its own slot, so the result is thread-count independent.
    std::exception_ptr failure;
    const auto count = static_cast<std::ptrdiff_t>(schedule.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t k = 0; k < count; ++k) {
        try {
            const double e = schedule[k];
            fit.points[k] = {e, std::abs(std::log(e)), h_half_spectral(mollify2d(grid, e)).value};
        } catch (...) {
#pragma omp critical(margconv_scaling_failure)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    const std::size_t n_fit = (2 * schedule.size() + 2) / 3;
    fit.fit_from = schedule.size() - n_fit;
    std::vector<double> x, y;
    for (std::size_t k = fit.fit_from; k < schedule.size(); ++k) {
        x.push_back(fit.points[k].log_inv_eps);
        y.push_back(fit.points[k].energy);
    }
    fit.degenerate = true;
    for (double v : y)
        if (std::abs(v - y.front()) > 1e-14 * std::max(1.0, std::abs(y.front()))) fit.degenerate = false;
    fit_line(x, y, fit.slope, fit.intercept, fit.r2);
    return fit;
}

}  // namespace margconv
