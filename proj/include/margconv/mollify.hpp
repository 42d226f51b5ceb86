#pragma once

#include <vector>

#include "margconv/grid.hpp"

namespace margconv {

/// Throws ResolutionError when eps < 2 * spacing.
void check_resolvable(double epsilon, double spacing);

/// Sampled gamma_{1,eps} at t_k = (k - (m-1)/2) dt, renormalized so sum(values) dt = 1.
Profile1D gaussian_kernel_1d(double epsilon, double dt, int m);

/// Sampled gamma_{2,eps} centred on the grid centre, renormalized so sum(values) h^2 = 1.
/// Separable: it is the outer product of the 1D kernel on the same lattice.
ScalarField gaussian_kernel_2d(double epsilon, const GridSpec& spec);

/// Circular FFT convolution with the renormalized Gaussian. The BinaryGrid overload also
/// re-checks the L/8 margin.
ScalarField mollify2d(const BinaryGrid& grid, double epsilon);
ScalarField mollify2d(const ScalarField& field, double epsilon);

Profile1D mollify1d(const Profile1D& profile, double epsilon);

/// eps_k = eps0 * ratio^k for k = 0 .. count-1.
std::vector<double> geometric_schedule(double eps0, double ratio, int count);

/// eps0 * ratio^k for every k with eps_k >= eps_min (up to 1e-9 relative slack).
std::vector<double> schedule_down_to(double eps0, double ratio, double eps_min);

/// Default schedule on a grid: L/32 halving down to the 2h resolution floor.
std::vector<double> default_schedule(const GridSpec& spec);

}  // namespace margconv
