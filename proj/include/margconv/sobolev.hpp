#pragma once

#include <string>
#include <vector>

#include "margconv/grid.hpp"

namespace margconv {

enum class EnergyMethod { spectral, direct, localized };

std::string to_string(EnergyMethod m);

struct EnergyValue {
    double value = 0.0;
    EnergyMethod method = EnergyMethod::spectral;
    double epsilon = 0.0;  ///< source scale (0 when not mollified)
    Point2 center{};       ///< localized only
    double radius = 0.0;   ///< localized only
};

struct ScalingPoint {
    double epsilon = 0.0;
    double log_inv_eps = 0.0;  ///< |log eps|
    double energy = 0.0;
};

struct ScalingFit {
    std::vector<ScalingPoint> points;  ///< the whole schedule
    std::size_t fit_from = 0;          ///< first point used by the least-squares fit
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    bool degenerate = false;  ///< every fitted energy equal
};

/// int |xi| |u_hat(xi)|^2 dxi on the periodic grid (u_hat with kernel e^{-i xi.x}); DC is 0.
double spectral_energy_raw(const ScalarField& field);

/// kCalibrationC * spectral_energy_raw.
EnergyValue h_half_spectral(const ScalarField& field);

/// Direct double sum over ordered cell pairs, weight h^4 / |x - y|^3. Throws CostGuardError
/// for N > kDirectMaxN.
EnergyValue h_half_direct(const ScalarField& field);

/// Direct double sum restricted to cell centres in B_{r0}(x0), divided by |log eps|.
/// Requires the ball inside the grid and r0 >= 10 eps.
EnergyValue localized_energy(const ScalarField& field, Point2 x0, double r0, double epsilon);

/// Energies h_half_spectral(mollify2d(grid, eps_k)) against |log eps_k|, with a least-squares
/// line through the last ceil(2/3) of the schedule (the smallest scales).
ScalingFit perimeter_by_scaling(const BinaryGrid& grid, const std::vector<double>& schedule);

/// Ordinary least squares y = slope x + intercept; r2 = 1 - SS_res / SS_tot.
void fit_line(const std::vector<double>& x, const std::vector<double>& y, double& slope, double& intercept, double& r2);

}  // namespace margconv
