#pragma once

#include <vector>

#include "kgfv/grid.hpp"
#include "kgfv/units.hpp"

namespace kgfv {

// Thin deterministic wrappers around FFTW (double precision, FFTW_ESTIMATE
// plans so results do not depend on runtime measurement).

// Unnormalized forward DFT: F_j = sum_k f_k exp(-2 pi i j k / n).
std::vector<Complex> fft(const std::vector<Complex>& in);

// Inverse DFT including the 1/n factor, so ifft(fft(f)) == f to roundoff.
std::vector<Complex> ifft(const std::vector<Complex>& in);

// Physical momenta of the DFT modes on a grid with spacing dx:
//   p_j = 2 pi hbar j~ / (n dx),  j~ the signed frequency index
// in standard FFT order (non-negative frequencies first, then negative).
std::vector<double> fft_momenta(const Grid1D& grid, const Units& units);

}  // namespace kgfv
