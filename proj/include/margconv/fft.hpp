#pragma once

#include <complex>
#include <vector>

// Thin FFTW wrapper. Plans are created once per shape (FFTW_ESTIMATE, so planning never
// depends on timing) and cached in a mutex-guarded store; execution uses the new-array
// interface and is safe from any thread.

namespace margconv::fft {

using cplx = std::complex<double>;

/// Unnormalized forward transform of a rows x cols real array (row-major).
/// Returns rows x (cols/2 + 1) half spectrum, row-major.
std::vector<cplx> r2c_2d(int rows, int cols, const std::vector<double>& in);

/// Inverse of r2c_2d including the 1/(rows*cols) factor.
std::vector<double> c2r_2d(int rows, int cols, const std::vector<cplx>& in);

/// 1D analogues; the half spectrum has n/2 + 1 entries.
std::vector<cplx> r2c_1d(int n, const std::vector<double>& in);
std::vector<double> c2r_1d(int n, const std::vector<cplx>& in);

/// Number of plans currently cached (diagnostics only).
std::size_t cached_plans();

}  // namespace margconv::fft
