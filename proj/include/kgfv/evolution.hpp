#pragma once

#include <memory>
#include <string>
#include <vector>

#include "kgfv/fv.hpp"
#include "kgfv/grid.hpp"
#include "kgfv/units.hpp"

namespace kgfv {

// External potential profile. SharpStep is the idealized discontinuity used
// by the analytic matching; SmoothStep is its logistic regularization
//   V(x) = V0 / (1 + exp(-(x - center)/width)),
// which is what the finite-difference evolution actually sees.
enum class PotentialKind { SharpStep, SmoothStep };

struct PotentialProfile {
  PotentialKind kind = PotentialKind::SmoothStep;
  double V0 = 0.0;
  double center = 0.0;
  double width = 0.0;  // SmoothStep only; must be > 0 there

  // Pointwise analytic value. The sharp step keeps its true discontinuity:
  // V(x) = 0 for x < center and V0 for x >= center.
  double evaluate(double x) const;
};

// Samples the profile on a grid. A SharpStep is regularized to a SmoothStep
// of width 2*dx first: on a grid the discontinuity is not representable, and
// an unresolved jump produces spurious lattice reflection.
std::vector<double> sample_potential(const PotentialProfile& profile,
                                     const Grid1D& grid);

// Gaussian wavepacket parameters:
//   psi(x, 0) = amplitude * exp(-(x-x0)^2 / (4 sigma^2)) * exp(i p0 x / hbar).
struct WavepacketSpec {
  double x0 = 0.0;
  double sigma = 1.0;      // must be > 0
  double p0 = 0.0;
  double amplitude = 1.0;  // must be > 0 and finite
};

// Non-fatal quality warnings (e.g. momentum spread large enough that the
// packet contains a visible negative-momentum tail: sigma * |p0| / hbar < 3).
std::vector<std::string> wavepacket_warnings(const WavepacketSpec& spec,
                                             const Units& units);

// Builds a purely positive-energy packet: psi is the Gaussian above and
// psi_dot is synthesized mode-by-mode in momentum space,
//   psi_dot = IFFT[ -i E(p)/hbar * FFT[psi] ],
// so every Fourier mode rotates with its own positive-branch frequency.
// The result is returned decomposed (with V = 0); its chi component is the
// physical antiparticle admixture of a localized packet, not an error.
//
// Resolution preconditions (PreconditionError): dx < sigma/8 and
// dx < hbar/(4|p0|).
FVField build_initial_wavepacket(const WavepacketSpec& spec, const Grid1D& grid,
                                 const Units& units);

// Largest accepted time step, dt_max = dx / c: one light-crossing of a cell.
// The implicit stepper is unconditionally stable, but beyond this the fast
// phase mc^2/hbar + lattice scales are no longer tracked accurately, so
// larger steps are refused rather than silently degraded.
double max_stable_dt(const Grid1D& grid, const Units& units);

// One Crank-Nicolson step of the coupled first-order system
//   i hbar d/dt phi = (mc^2 + V) phi - (hbar^2/2m) (phi + chi)''
//   i hbar d/dt chi = -(mc^2 - V) chi + (hbar^2/2m) (phi + chi)''
// with Dirichlet (zero) boundary values. The Cayley form conserves the total
// charge sum(|phi|^2 - |chi|^2) exactly in exact arithmetic because the
// discrete Hamiltonian is tau3-pseudo-Hermitian; in floating point the drift
// is at the roundoff level.
//
// Throws NumericalError if dt exceeds max_stable_dt or if the step produces
// non-finite values.
FVField step_evolve(const FVField& field, const PotentialProfile& potential,
                    double dt, const Units& units);

// Reusable stepper: samples the potential and allocates the block-tridiagonal
// workspace once, then advances a field in place step by step. step_evolve is
// a one-shot convenience wrapper around this.
class CrankNicolsonStepper {
 public:
  CrankNicolsonStepper(const Grid1D& grid, const std::vector<double>& potential,
                       double dt, const Units& units);
  ~CrankNicolsonStepper();
  CrankNicolsonStepper(const CrankNicolsonStepper&) = delete;
  CrankNicolsonStepper& operator=(const CrankNicolsonStepper&) = delete;

  // Advances by one dt. Throws NumericalError on non-finite output.
  void advance(FVField& field);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct Snapshot {
  double time = 0.0;
  FVField field;
};

// Time series of integral diagnostics plus optional field snapshots.
// Q_left/Q_right split the charge integral at the potential center;
// Q_left + Q_right = Q_total up to integration roundoff.
struct SimulationRecord {
  std::vector<double> times;
  std::vector<double> Q_total;
  std::vector<double> Q_left;
  std::vector<double> Q_right;
  std::vector<double> max_abs_psi;
  std::vector<Snapshot> snapshots;
};

struct RunOptions {
  int record_every = 1;     // diagnostics cadence in steps (>= 1)
  int snapshot_every = 0;   // 0 = no snapshots
  bool absorbing_boundary = false;  // cosine mask over the outer 10% per side
};

// Full scattering/free run: builds the packet, checks that it starts well
// clear of the step (|x0 - center| > 5 sigma whenever V0 != 0), then steps to
// t_final recording diagnostics. Initial state is always recorded; so is the
// final one. t_final = 0 yields the single initial row.
SimulationRecord run_simulation(const WavepacketSpec& packet,
                                const PotentialProfile& potential,
                                const Grid1D& grid, double t_final, double dt,
                                const Units& units,
                                const RunOptions& options = {});

}  // namespace kgfv
