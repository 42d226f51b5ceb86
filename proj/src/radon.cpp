#include "margconv/radon.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "margconv/constants.hpp"
#include "margconv/error.hpp"
#include "margconv/fft.hpp"
#include "margconv/kernels.hpp"
#include "margconv/mollify.hpp"
#include "margconv/sobolev.hpp"

namespace margconv {

namespace {

using cplx = std::complex<double>;

void check_angle(double theta) {
    if (!(theta >= 0.0 && theta < constants::kPi)) throw PreconditionError("marginal angle must lie in [0, pi)");
}

MarginalFamily empty_family(const GridSpec& spec, const std::vector<double>& thetas) {
    MarginalFamily f;
    f.thetas = thetas;
    f.m = rotation_extent(spec.n);
    f.dt = spec.h();
    f.t0 = -(f.m - 1) / 2.0 * f.dt;
    return f;
}

double min_positive_gap(double t, double a, double b) { return std::min(std::abs(t - a), std::abs(t - b)); }

}  // namespace

Profile1D MarginalFamily::row(std::size_t a) const {
    Profile1D p;
    p.dt = dt;
    p.t0 = t0;
    const auto v = values(a);
    p.values.assign(v.begin(), v.end());
    return p;
}

std::vector<double> angle_lattice(int n_angles) {
    if (n_angles < 1) throw PreconditionError("angle lattice needs at least one angle");
    std::vector<double> out(n_angles);
    for (int a = 0; a < n_angles; ++a) out[a] = constants::kPi * a / n_angles;
    return out;
}

MarginalFamily radon_family(const ScalarField& field, const std::vector<double>& thetas) {
    for (double t : thetas) check_angle(t);
    auto fam = empty_family(field.spec, thetas);
    fam.sinogram = kernels::parallel::footprint_sinogram(field, thetas, fam.m);
    fam.epsilon = field.provenance == Provenance::mollified ? field.epsilon : 0.0;
    return fam;
}

MarginalFamily radon_family(const BinaryGrid& grid, const std::vector<double>& thetas) {
    return radon_family(to_field(grid), thetas);
}

Profile1D radon_marginal(const ScalarField& field, double theta) { return radon_family(field, {theta}).row(0); }

Profile1D radon_marginal(const BinaryGrid& grid, double theta) { return radon_marginal(to_field(grid), theta); }

Profile1D radon_marginal_rotated(const ScalarField& field, double theta) {
    check_angle(theta);
    const int m = rotation_extent(field.spec.n);
    const auto rot = kernels::parallel::rotate_resample(field, theta, m, kernels::Interp::bilinear);
    Profile1D p;
    p.dt = field.spec.h();
    p.t0 = -(m - 1) / 2.0 * p.dt;
    p.values.assign(m, 0.0);
    for (int row = 0; row < m; ++row)
        for (int q = 0; q < m; ++q) p.values[q] += rot[static_cast<std::size_t>(row) * m + q];
    for (double& v : p.values) v *= p.dt;
    return p;
}

MarginalFamily mollify_family(const MarginalFamily& family, double epsilon) {
    check_resolvable(epsilon, family.dt);
    MarginalFamily out = family;
    out.epsilon = epsilon;
    const auto count = static_cast<std::ptrdiff_t>(family.n_angles());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t a = 0; a < count; ++a) {
        const auto row = mollify1d(family.row(a), epsilon);
        std::copy(row.values.begin(), row.values.end(), out.sinogram.begin() + a * family.m);
    }
    return out;
}

Profile1D marginal_derivative(const Profile1D& profile) {
    Profile1D d = profile;
    const std::size_t m = profile.size();
    const auto& v = profile.values;
    if (m < 2) {
        std::fill(d.values.begin(), d.values.end(), 0.0);
        return d;
    }
    d.values[0] = (v[1] - v[0]) / profile.dt;
    d.values[m - 1] = (v[m - 1] - v[m - 2]) / profile.dt;
    for (std::size_t k = 1; k + 1 < m; ++k) d.values[k] = (v[k + 1] - v[k - 1]) / (2 * profile.dt);
    return d;
}

Profile1D spectral_derivative(const Profile1D& profile) {
    const int m = static_cast<int>(profile.size());
    auto spec = fft::r2c_1d(m, profile.values);
    const double dxi = 2 * constants::kPi / (m * profile.dt);
    for (std::size_t k = 0; k < spec.size(); ++k) {
        if (m % 2 == 0 && static_cast<int>(k) == m / 2)
            spec[k] = 0.0;
        else
            spec[k] *= cplx(0.0, dxi * static_cast<double>(k));
    }
    Profile1D d = profile;
    d.values = fft::c2r_1d(m, spec);
    return d;
}

std::vector<double> slice_frequencies(const GridSpec& spec, int pad, double fraction_of_nyquist) {
    const double step = 2 * constants::kPi / (pad * spec.n * spec.h());
    const double limit = fraction_of_nyquist * constants::kPi / spec.h();
    std::vector<double> out;
    const int kmax = static_cast<int>(std::floor(limit / step + 1e-9));
    for (int k = -kmax; k <= kmax; ++k) out.push_back(k * step);
    return out;
}

SliceCheck fourier_slice_check(const ScalarField& field, const std::vector<double>& thetas,
                               const std::vector<double>& taus, int pad) {
    if (pad < 1) throw PreconditionError("fourier_slice_check needs pad >= 1");
    const int n = field.spec.n;
    const double h = field.spec.h();
    for (double tau : taus)
        if (std::abs(tau) > constants::kPi / h * (1 + 1e-12))
            throw PreconditionError("fourier_slice_check: tau outside the Nyquist band");
    const int q = pad * n;
    const int half = q / 2 + 1;

    // Cell (i, j) sits at ((j - n/2 + 1/2) h, (i - n/2 + 1/2) h) from the centre; store it at
    // index (j - n/2) so the FFT phase is taken about a point half a cell away, then correct.
    std::vector<double> padded(static_cast<std::size_t>(q) * q, 0.0);
    for (int i = 0; i < n; ++i) {
        const int ii = ((i - n / 2) % q + q) % q;
        for (int j = 0; j < n; ++j) {
            const int jj = ((j - n / 2) % q + q) % q;
            padded[static_cast<std::size_t>(ii) * q + jj] = field.at(i, j);
        }
    }
    const double shift = (n % 2 == 0) ? 0.5 * h : 0.0;
    const auto big = fft::r2c_2d(q, q, padded);
    auto lookup = [&](int kx, int ky) -> cplx {
        if (kx >= 0) return big[static_cast<std::size_t>(((ky % q) + q) % q) * half + kx];
        return std::conj(big[static_cast<std::size_t>(((-ky % q) + q) % q) * half + (-kx)]);
    };
    const double dxi = 2 * constants::kPi / (q * h);
    auto field_hat = [&](double xi_x, double xi_y) {
        const double fx = xi_x / dxi, fy = xi_y / dxi;
        const int x0 = static_cast<int>(std::floor(fx)), y0 = static_cast<int>(std::floor(fy));
        const double ax = fx - x0, ay = fy - y0;
        const cplx v = (1 - ay) * ((1 - ax) * lookup(x0, y0) + ax * lookup(x0 + 1, y0)) +
                       ay * ((1 - ax) * lookup(x0, y0 + 1) + ax * lookup(x0 + 1, y0 + 1));
        return v * h * h * std::exp(cplx(0.0, -(xi_x + xi_y) * shift));
    };

    const auto fam = radon_family(field, thetas);
    const std::size_t n_t = taus.size();
    std::vector<cplx> lhs(thetas.size() * n_t), rhs(thetas.size() * n_t);
    const auto count = static_cast<std::ptrdiff_t>(thetas.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t a = 0; a < count; ++a) {
        const auto w = fam.values(a);
        const double c = std::cos(thetas[a]), s = std::sin(thetas[a]);
        for (std::size_t k = 0; k < n_t; ++k) {
            const double tau = taus[k];
            cplx acc = 0.0;
            for (int b = 0; b < fam.m; ++b)
                if (w[b] != 0.0) acc += w[b] * std::exp(cplx(0.0, -tau * fam.t(b)));
            lhs[a * n_t + k] = acc * fam.dt;
            rhs[a * n_t + k] = field_hat(tau * c, tau * s);
        }
    }
    SliceCheck out;
    for (const auto& v : rhs) out.reference_max = std::max(out.reference_max, std::abs(v));
    const double floor = 1e-6 * out.reference_max;
    for (std::size_t k = 0; k < rhs.size(); ++k) {
        if (std::abs(rhs[k]) < floor || out.reference_max == 0.0) continue;
        const double diff = std::abs(lhs[k] - rhs[k]);
        out.max_abs_error = std::max(out.max_abs_error, diff);
        ++out.samples;
    }
    out.max_rel_error = out.reference_max > 0 ? out.max_abs_error / out.reference_max : 0.0;
    return out;
}

IdentityCheck global_identity_check(const ScalarField& field, int n_angles) {
    if (n_angles < 1) throw PreconditionError("global_identity_check needs n_angles >= 1");
    const auto fam = radon_family(field, angle_lattice(n_angles));
    std::vector<double> per_theta(n_angles, 0.0);
    for (int a = 0; a < n_angles; ++a) {
        const auto d = marginal_derivative(fam.row(a));
        double acc = 0.0;
        for (double v : d.values) acc += v * v;
        per_theta[a] = acc * fam.dt;
    }
    IdentityCheck out;
    for (double v : per_theta) out.marginal_energy += v;
    out.marginal_energy *= constants::kPi / n_angles;
    out.spectral_energy = spectral_energy_raw(field) / (2 * constants::kPi);
    if (out.marginal_energy == 0.0 && out.spectral_energy == 0.0) {
        out.degenerate = true;
        out.ratio = 1.0;
    } else {
        out.ratio = out.marginal_energy / out.spectral_energy;
    }
    return out;
}

std::vector<SupportInterval> support_analysis(const MarginalFamily& family, double tau_supp) {
    if (!(tau_supp > 0)) throw PreconditionError("support_analysis needs tau_supp > 0");
    std::vector<SupportInterval> out(family.n_angles());
    for (std::size_t a = 0; a < family.n_angles(); ++a) {
        const auto w = family.values(a);
        auto& s = out[a];
        s.theta = family.thetas[a];
        std::vector<std::pair<int, int>> runs;
        for (int k = 0; k < family.m; ++k) {
            if (!(w[k] > tau_supp)) continue;
            if (!runs.empty() && runs.back().second == k - 1)
                runs.back().second = k;
            else
                runs.emplace_back(k, k);
        }
        if (runs.empty()) {
            s.empty = true;
            s.is_single_interval = false;
            continue;
        }
        s.a = family.t(runs.front().first);
        s.b = family.t(runs.back().second);
        s.is_single_interval = runs.size() == 1;
        for (std::size_t r = 0; r + 1 < runs.size(); ++r)
            s.gaps.emplace_back(family.t(runs[r].second), family.t(runs[r + 1].first));
    }
    return out;
}

EnergyMeasure nu_measure(const MarginalFamily& exact, const std::vector<SupportInterval>& supports, double epsilon,
                         double eta, double delta) {
    check_resolvable(epsilon, exact.dt);
    if (eta < 4 * epsilon * (1 - 1e-12)) throw PreconditionError("nu_measure needs eta >= 4 eps");
    if (!(delta > eta)) throw PreconditionError("nu_measure needs delta > eta");
    if (supports.size() != exact.n_angles()) throw PreconditionError("nu_measure: supports do not match the family");
    const auto moll = mollify_family(exact, epsilon);
    const std::size_t n = exact.n_angles();
    const double dtheta = constants::kPi / static_cast<double>(n);
    const double norm = 1.0 / std::abs(std::log(epsilon));

    EnergyMeasure e;
    e.epsilon = epsilon;
    e.eta = eta;
    e.delta = delta;
    e.thetas = exact.thetas;
    e.m = exact.m;
    e.nu.assign(n * exact.m, 0.0);
    e.interior_by_theta.assign(n, 0.0);
    std::vector<double> end_by(n, 0.0), trans_by(n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto& s = supports[a];
        if (s.empty) {
            e.flagged.push_back(a);
            continue;
        }
        const auto d = marginal_derivative(moll.row(a));
        for (int k = 0; k < exact.m; ++k) {
            const double mass = d.values[k] * d.values[k] * norm * exact.dt * dtheta;
            e.nu[a * exact.m + k] = mass;
            const double t = exact.t(k);
            if (min_positive_gap(t, s.a, s.b) < eta)
                end_by[a] += mass;
            else if (t >= s.a + delta && t <= s.b - delta)
                e.interior_by_theta[a] += mass;
            else
                trans_by[a] += mass;
        }
    }
    for (std::size_t a = 0; a < n; ++a) {
        e.endpoint += end_by[a];
        e.interior += e.interior_by_theta[a];
        e.transition += trans_by[a];
    }
    e.total = e.endpoint + e.interior + e.transition;
    return e;
}

EnergyMeasure nu_measure(const BinaryGrid& grid, double epsilon, int n_angles, double eta, double delta) {
    const auto exact = radon_family(grid, angle_lattice(n_angles));
    return nu_measure(exact, support_analysis(exact, grid.spec.h()), epsilon, eta, delta);
}

namespace {

template <class Value>
ConcavityResult midpoint_test(const Profile1D& p, double tau, int max_step, Value value) {
    if (!(tau > 0)) throw PreconditionError("concavity tests need tau > 0");
    if (max_step < 1) throw PreconditionError("concavity tests need max_step >= 1");
    ConcavityResult r;
    r.slack = 1e-6 + 2 * p.dt * p.dt / tau;
    r.worst_deficit = -std::numeric_limits<double>::infinity();
    const auto& w = p.values;
    const std::size_t m = w.size();
    for (int s = 1; s <= max_step; ++s) {
        const auto step = static_cast<std::size_t>(s);
        for (std::size_t k = step; k + step < m; ++k) {
            if (!(w[k - step] > tau && w[k] > tau && w[k + step] > tau)) continue;
            ++r.tested;
            const double deficit = 0.5 * (value(w[k - step]) + value(w[k + step])) - value(w[k]);
            if (deficit > r.worst_deficit) {
                r.worst_deficit = deficit;
                r.worst_index = k;
                r.worst_step = step;
            }
        }
    }
    if (r.tested == 0) r.worst_deficit = 0.0;
    r.pass = r.worst_deficit <= r.slack;
    return r;
}

}  // namespace

ConcavityResult log_concavity_test(const Profile1D& profile, double tau, int max_step) {
    return midpoint_test(profile, tau, max_step, [](double v) { return std::log(v); });
}

ConcavityResult concavity_test(const Profile1D& profile, double tau, int max_step) {
    return midpoint_test(profile, tau, max_step, [](double v) { return v; });
}

MarginalDiagnostics marginal_diagnostics(const MarginalFamily& exact, double delta, const std::vector<double>& schedule,
                                         double tau_supp) {
    if (schedule.empty()) throw PreconditionError("marginal_diagnostics needs a non-empty schedule");
    const double eps_max = *std::max_element(schedule.begin(), schedule.end());
    if (!(delta > 4 * eps_max)) throw PreconditionError("marginal_diagnostics needs delta > 4 max(eps)");
    const auto supports = support_analysis(exact, tau_supp);
    const std::size_t n = exact.n_angles();

    MarginalDiagnostics d;
    d.delta = delta;
    d.schedule = schedule;
    d.per_theta.resize(n);
    for (std::size_t a = 0; a < n; ++a) {
        d.per_theta[a].theta = exact.thetas[a];
        d.per_theta[a].lipschitz.assign(schedule.size(), 0.0);
        const auto& s = supports[a];
        d.per_theta[a].flagged = s.empty || s.b - s.a < 2 * delta;
    }
    const std::size_t smallest =
        static_cast<std::size_t>(std::min_element(schedule.begin(), schedule.end()) - schedule.begin());
    for (std::size_t e = 0; e < schedule.size(); ++e) {
        const auto moll = mollify_family(exact, schedule[e]);
        for (std::size_t a = 0; a < n; ++a) {
            auto& th = d.per_theta[a];
            if (th.flagged) continue;
            const auto& s = supports[a];
            const auto row = moll.row(a);
            const auto der = marginal_derivative(row);
            double sup = 0.0;
            for (int k = 0; k < exact.m; ++k) {
                const double t = exact.t(k);
                if (t >= s.a + delta && t <= s.b - delta) sup = std::max(sup, std::abs(der.values[k]));
            }
            th.lipschitz[e] = sup;
            if (e == smallest) {
                th.log_concave = log_concavity_test(row, tau_supp).pass;
                // Concavity of w itself only holds up to the smeared support ends, so it is
                // judged on the delta-interior of the mollified marginal.
                Profile1D inner{row.dt, 0.0, {}};
                for (int k = 0; k < exact.m; ++k) {
                    const double t = exact.t(k);
                    if (t < s.a + delta || t > s.b - delta) continue;
                    if (inner.values.empty()) inner.t0 = t;
                    inner.values.push_back(row.values[k]);
                }
                th.concave = concavity_test(inner, tau_supp).pass;
            }
        }
    }
    std::size_t lc = 0, cc = 0, ok = 0;
    for (std::size_t a = 0; a < n; ++a) {
        auto& th = d.per_theta[a];
        if (th.flagged) {
            ++d.flagged;
            continue;
        }
        ++ok;
        lc += th.log_concave;
        cc += th.concave;
    }
    d.log_concave_fraction = ok ? static_cast<double>(lc) / ok : 0.0;
    d.concave_fraction = ok ? static_cast<double>(cc) / ok : 0.0;

    d.uniform_lipschitz.assign(schedule.size(), 0.0);
    for (std::size_t e = 0; e < schedule.size(); ++e)
        for (const auto& th : d.per_theta)
            if (!th.flagged) d.uniform_lipschitz[e] = std::max(d.uniform_lipschitz[e], th.lipschitz[e]);
    // "Last three" in order of decreasing eps.
    std::vector<std::size_t> order(schedule.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::stable_sort(order.begin(), order.end(), [&](auto x, auto y) { return schedule[x] > schedule[y]; });
    const std::size_t first = order.size() > 3 ? order.size() - 3 : 0;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (std::size_t k = first; k < order.size(); ++k) {
        lo = std::min(lo, d.uniform_lipschitz[order[k]]);
        hi = std::max(hi, d.uniform_lipschitz[order[k]]);
    }
    d.lipschitz_ratio = lo > 0 ? hi / lo : (hi > 0 ? std::numeric_limits<double>::infinity() : 1.0);
    return d;
}

}  // namespace margconv
