#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "margconv/grid.hpp"

namespace margconv {

/// Marginals w_theta(t) on a (theta, t) lattice. Bin k sits at t_k = t0 + k dt with t
/// measured from the grid centre along e_theta = (cos theta, sin theta).
struct MarginalFamily {
    std::vector<double> thetas;
    int m = 0;
    double dt = 0.0;
    double t0 = 0.0;
    std::vector<double> sinogram;  ///< thetas.size() x m, row-major
    double epsilon = 0.0;          ///< 0 for marginals of the unmollified source

    std::size_t n_angles() const noexcept { return thetas.size(); }
    double t(std::size_t k) const noexcept { return t0 + static_cast<double>(k) * dt; }
    std::span<const double> values(std::size_t a) const {
        return std::span<const double>(sinogram).subspan(a * static_cast<std::size_t>(m), m);
    }
    Profile1D row(std::size_t a) const;
};

/// theta_a = a pi / n_angles, a = 0 .. n_angles-1.
std::vector<double> angle_lattice(int n_angles);

/// Exact cell-footprint projection (mass preserving, exact column sums at theta = 0).
Profile1D radon_marginal(const ScalarField& field, double theta);
Profile1D radon_marginal(const BinaryGrid& grid, double theta);

/// Alternate route: rotate by -theta with bilinear interpolation, then sum columns times h.
Profile1D radon_marginal_rotated(const ScalarField& field, double theta);

MarginalFamily radon_family(const ScalarField& field, const std::vector<double>& thetas);
MarginalFamily radon_family(const BinaryGrid& grid, const std::vector<double>& thetas);

/// Row-wise mollify1d.
MarginalFamily mollify_family(const MarginalFamily& family, double epsilon);

/// Central differences, one-sided at the ends.
Profile1D marginal_derivative(const Profile1D& profile);

/// Periodic spectral derivative (Nyquist mode dropped); cross-check only.
Profile1D spectral_derivative(const Profile1D& profile);

struct SliceCheck {
    double max_rel_error = 0.0;  ///< max |diff| / max |phi_hat| over samples with |phi_hat| >= 1e-6 max
    double max_abs_error = 0.0;
    double reference_max = 0.0;
    std::size_t samples = 0;
};

/// 1D transform of each marginal against the zero-padded 2D transform interpolated
/// (bilinear in frequency) along tau e_theta. Both transforms are taken about the grid centre.
SliceCheck fourier_slice_check(const ScalarField& field, const std::vector<double>& thetas,
                               const std::vector<double>& taus, int pad = 4);

/// Frequencies 2 pi k / (pad N h) with |tau| <= fraction * pi / h (lattice points of the
/// padded transform, so axis angles need no interpolation).
std::vector<double> slice_frequencies(const GridSpec& spec, int pad = 4, double fraction_of_nyquist = 0.25);

struct IdentityCheck {
    double marginal_energy = 0.0;  ///< sum_theta sum_t |w'|^2 dt dtheta
    double spectral_energy = 0.0;  ///< (1 / 2 pi) int |xi| |phi_hat|^2
    double ratio = 1.0;
    bool degenerate = false;       ///< both sides zero; ratio reported as 1
};

IdentityCheck global_identity_check(const ScalarField& field, int n_angles);

struct SupportInterval {
    double theta = 0.0;
    double a = 0.0;
    double b = 0.0;
    bool empty = false;
    bool is_single_interval = true;
    std::vector<std::pair<double, double>> gaps;
};

/// Super-level sets {w_theta > tau_supp} as unions of lattice intervals.
std::vector<SupportInterval> support_analysis(const MarginalFamily& family, double tau_supp);

struct EnergyMeasure {
    double epsilon = 0.0;
    double eta = 0.0;
    double delta = 0.0;
    std::vector<double> thetas;
    int m = 0;
    std::vector<double> nu;  ///< n_angles x m masses |w'|^2 / |log eps| dt dtheta
    double total = 0.0;
    double endpoint = 0.0;    ///< dist(t, {a, b}) < eta
    double interior = 0.0;    ///< a + delta <= t <= b - delta
    double transition = 0.0;  ///< everything else
    std::vector<double> interior_by_theta;
    std::vector<std::size_t> flagged;  ///< angles with empty support, excluded
};

/// Builds the mollified marginals through mollify1d of the exact marginals, tau_supp = h.
EnergyMeasure nu_measure(const BinaryGrid& grid, double epsilon, int n_angles, double eta, double delta);

/// Same, reusing precomputed exact marginals and their supports.
EnergyMeasure nu_measure(const MarginalFamily& exact, const std::vector<SupportInterval>& supports, double epsilon,
                         double eta, double delta);

struct ConcavityResult {
    bool pass = true;
    double worst_deficit = 0.0;  ///< largest midpoint deficit found (<= 0 when strictly concave)
    std::size_t worst_index = 0;
    std::size_t worst_step = 0;
    double slack = 0.0;
    std::size_t tested = 0;
};

/// Midpoint test log w(t) >= (log w(t - s dt) + log w(t + s dt)) / 2 - slack for every step
/// s = 1 .. max_step and every triple above `tau`; slack = 1e-6 + 2 dt^2 / tau.
ConcavityResult log_concavity_test(const Profile1D& profile, double tau, int max_step = 1);

/// Midpoint test on w itself over triples above `tau`, slack 1e-6 + 2 dt^2 / tau.
ConcavityResult concavity_test(const Profile1D& profile, double tau, int max_step = 1);

struct ThetaDiagnostics {
    double theta = 0.0;
    bool flagged = false;            ///< delta-interior empty
    std::vector<double> lipschitz;   ///< sup |w'_{theta,eps}| on the delta-interior, per scale
    bool log_concave = true;         ///< mollified marginal at the smallest scale
    bool concave = true;             ///< same marginal, restricted to the delta-interior
};

struct MarginalDiagnostics {
    double delta = 0.0;
    std::vector<double> schedule;
    std::vector<ThetaDiagnostics> per_theta;
    std::vector<double> uniform_lipschitz;  ///< C_delta(eps) = max over theta, per scale
    double lipschitz_ratio = 1.0;           ///< max / min of C_delta over the last three scales
    std::size_t flagged = 0;
    double log_concave_fraction = 1.0;
    double concave_fraction = 1.0;
};

/// Requires delta > 4 max(schedule).
MarginalDiagnostics marginal_diagnostics(const MarginalFamily& exact, double delta, const std::vector<double>& schedule,
                                         double tau_supp);

}  // namespace margconv
