#include "margconv/mollify.hpp"

#include <cmath>
#include <sstream>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"
#include "margconv/fft.hpp"
#include "margconv/geometry.hpp"

namespace margconv {

namespace {

// Unit-mass kernel on an n-periodic lattice, index 0 at the origin (wrap distances).
std::vector<double> periodic_kernel(double epsilon, double dt, int n) {
    std::vector<double> k(n);
    double mass = 0.0;
    for (int a = 0; a < n; ++a) {
        const double d = std::min(a, n - a) * dt / epsilon;
        k[a] = std::exp(-0.5 * d * d);
        mass += k[a];
    }
    for (double& v : k) v /= mass * dt;
    return k;
}

// Real spectrum (the kernel is even) scaled so that multiplying a transform by it and
// inverting yields the continuous convolution approximated on the lattice.
std::vector<double> kernel_spectrum_1d(double epsilon, double dt, int n) {
    const auto k = periodic_kernel(epsilon, dt, n);
    const auto spec = fft::r2c_1d(n, k);
    std::vector<double> out(spec.size());
    for (std::size_t a = 0; a < spec.size(); ++a) out[a] = spec[a].real() * dt;
    return out;
}

}  // namespace

void check_resolvable(double epsilon, double spacing) {
    const double min_eps = constants::kMinEpsilonCells * spacing;
    if (!(epsilon >= min_eps * (1 - 1e-12))) {
        std::ostringstream os;
        os << "epsilon = " << epsilon << " is below the resolution floor; minimum admissible epsilon is "
           << min_eps << " (2 cells)";
        throw ResolutionError(os.str(), min_eps);
    }
}

Profile1D gaussian_kernel_1d(double epsilon, double dt, int m) {
    check_resolvable(epsilon, dt);
    Profile1D p;
    p.dt = dt;
    p.t0 = -(m - 1) / 2.0 * dt;
    p.values.resize(m);
    double mass = 0.0;
    for (int k = 0; k < m; ++k) {
        const double z = p.t(k) / epsilon;
        p.values[k] = std::exp(-0.5 * z * z);
        mass += p.values[k];
    }
    for (double& v : p.values) v /= mass * dt;
    return p;
}

ScalarField gaussian_kernel_2d(double epsilon, const GridSpec& spec) {
    const auto k1 = gaussian_kernel_1d(epsilon, spec.h(), spec.n);
    ScalarField f(spec, Provenance::synthetic);
    for (int i = 0; i < spec.n; ++i)
        for (int j = 0; j < spec.n; ++j) f.at(i, j) = k1.values[i] * k1.values[j];
    return f;
}

ScalarField mollify2d(const ScalarField& field, double epsilon) {
    const auto& spec = field.spec;
    check_resolvable(epsilon, spec.h());
    const int n = spec.n;
    const auto k1 = kernel_spectrum_1d(epsilon, spec.h(), n);
    auto spectrum = fft::r2c_2d(n, n, field.values);
    const int half = n / 2 + 1;
    for (int i = 0; i < n; ++i) {
        const double ki = k1[i < half ? i : n - i];
        for (int j = 0; j < half; ++j) spectrum[static_cast<std::size_t>(i) * half + j] *= ki * k1[j];
    }
    ScalarField out(spec, Provenance::mollified);
    out.values = fft::c2r_2d(n, n, spectrum);
    out.epsilon = epsilon;
    return out;
}

ScalarField mollify2d(const BinaryGrid& grid, double epsilon) {
    check_resolvable(epsilon, grid.spec.h());
    if (!grid.empty()) {
        const double clearance = grid.boundary_clearance();
        if (clearance + grid.spec.h() / 2 < grid.spec.padding() * (1 - 1e-9)) {
            std::ostringstream os;
            os << "mollify2d: occupied cells reach " << clearance << " from the grid boundary; wraparound "
               << "requires the L/8 = " << grid.spec.padding() << " margin";
            throw MarginError(os.str());
        }
    }
    return mollify2d(to_field(grid), epsilon);
}

Profile1D mollify1d(const Profile1D& profile, double epsilon) {
    check_resolvable(epsilon, profile.dt);
    const int m = static_cast<int>(profile.size());
    const auto k1 = kernel_spectrum_1d(epsilon, profile.dt, m);
    auto spectrum = fft::r2c_1d(m, profile.values);
    for (std::size_t a = 0; a < spectrum.size(); ++a) spectrum[a] *= k1[a];
    Profile1D out = profile;
    out.values = fft::c2r_1d(m, spectrum);
    return out;
}

std::vector<double> geometric_schedule(double eps0, double ratio, int count) {
    if (!(eps0 > 0) || !(ratio > 0 && ratio < 1) || count < 1)
        throw PreconditionError("geometric_schedule needs eps0 > 0, ratio in (0, 1), count >= 1");
    std::vector<double> out;
    for (int k = 0; k < count; ++k) out.push_back(eps0 * std::pow(ratio, k));
    return out;
}

std::vector<double> schedule_down_to(double eps0, double ratio, double eps_min) {
    if (!(eps0 > 0) || !(ratio > 0 && ratio < 1) || !(eps_min > 0))
        throw PreconditionError("schedule_down_to needs eps0 > 0, ratio in (0, 1), eps_min > 0");
    std::vector<double> out;
    for (int k = 0;; ++k) {
        const double e = eps0 * std::pow(ratio, k);
        if (e < eps_min * (1 - 1e-9)) break;
        out.push_back(e);
    }
    return out;
}

std::vector<double> default_schedule(const GridSpec& spec) {
    return schedule_down_to(spec.side * constants::kScheduleStartFraction, constants::kScheduleRatio,
                            constants::kMinEpsilonCells * spec.h());
}

}  // namespace margconv
