#include "kgfv/spectral.hpp"

#include <fftw3.h>

#include <numbers>

#include "kgfv/errors.hpp"

namespace kgfv {

namespace {

// One transform, one plan: FFTW_ESTIMATE keeps planning deterministic (no
// runtime measurement), which matters for byte-reproducible output.
std::vector<Complex> transform(const std::vector<Complex>& in, int sign) {
  if (in.empty()) throw PreconditionError("fft: empty input");
  const int n = static_cast<int>(in.size());
  std::vector<Complex> out(in.size());
  // std::complex<double> is layout-compatible with fftw_complex (double[2]).
  auto* src = reinterpret_cast<fftw_complex*>(
      const_cast<Complex*>(in.data()));
  auto* dst = reinterpret_cast<fftw_complex*>(out.data());
  fftw_plan plan = fftw_plan_dft_1d(n, src, dst, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw NumericalError("fftw failed to create a plan");
  fftw_execute(plan);
  fftw_destroy_plan(plan);
  return out;
}

}  // namespace

std::vector<Complex> fft(const std::vector<Complex>& in) {
  return transform(in, FFTW_FORWARD);
}

std::vector<Complex> ifft(const std::vector<Complex>& in) {
  std::vector<Complex> out = transform(in, FFTW_BACKWARD);
  const double inv_n = 1.0 / static_cast<double>(in.size());
  for (auto& v : out) v *= inv_n;
  return out;
}

std::vector<double> fft_momenta(const Grid1D& grid, const Units& units) {
  validate(units);
  const int n = grid.n_points();
  const double dp = 2.0 * std::numbers::pi * units.hbar / (n * grid.dx());
  std::vector<double> p(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    const int j_signed = (j < (n + 1) / 2) ? j : j - n;
    p[static_cast<std::size_t>(j)] = dp * j_signed;
  }
  return p;
}

}  // namespace kgfv
