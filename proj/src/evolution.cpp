#include "kgfv/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "kgfv/errors.hpp"
#include "kgfv/spectral.hpp"

namespace kgfv {

namespace {

void validate_profile(const PotentialProfile& profile) {
  if (!std::isfinite(profile.V0) || !std::isfinite(profile.center)) {
    throw PreconditionError("potential parameters must be finite");
  }
  if (profile.kind == PotentialKind::SmoothStep &&
      !(std::isfinite(profile.width) && profile.width > 0.0)) {
    throw PreconditionError("smooth step requires a finite width > 0");
  }
}

// Overflow-safe logistic: never exponentiates a positive argument.
double logistic_step(double V0, double z) {
  if (z >= 0.0) return V0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return V0 * e / (1.0 + e);
}

void validate_packet(const WavepacketSpec& spec) {
  if (!(std::isfinite(spec.sigma) && spec.sigma > 0.0)) {
    throw PreconditionError("wavepacket sigma must be finite and > 0");
  }
  if (!std::isfinite(spec.x0) || !std::isfinite(spec.p0)) {
    throw PreconditionError("wavepacket x0 and p0 must be finite");
  }
  if (!(std::isfinite(spec.amplitude) && spec.amplitude > 0.0)) {
    throw PreconditionError("wavepacket amplitude must be finite and positive");
  }
}

}  // namespace

double PotentialProfile::evaluate(double x) const {
  validate_profile(*this);
  if (kind == PotentialKind::SharpStep) {
    return x < center ? 0.0 : V0;
  }
  return logistic_step(V0, (x - center) / width);
}

std::vector<double> sample_potential(const PotentialProfile& profile,
                                     const Grid1D& grid) {
  validate_profile(profile);
  PotentialProfile effective = profile;
  if (profile.kind == PotentialKind::SharpStep) {
    // A discontinuity is not representable on the lattice; an unresolved
    // jump scatters off the grid itself. Regularize to the narrowest
    // resolvable logistic instead.
    effective.kind = PotentialKind::SmoothStep;
    effective.width = 2.0 * grid.dx();
  }
  std::vector<double> V(static_cast<std::size_t>(grid.n_points()));
  for (int k = 0; k < grid.n_points(); ++k) {
    V[static_cast<std::size_t>(k)] = effective.evaluate(grid.point(k));
  }
  return V;
}

std::vector<std::string> wavepacket_warnings(const WavepacketSpec& spec,
                                             const Units& units) {
  validate(units);
  validate_packet(spec);
  std::vector<std::string> warnings;
  const double spread = spec.sigma * std::abs(spec.p0) / units.hbar;
  if (spread < 3.0) {
    warnings.push_back(
        "momentum spread hbar/(2 sigma) is not small against |p0| "
        "(sigma*|p0|/hbar < 3): the packet carries a visible tail of "
        "opposite-momentum modes");
  }
  return warnings;
}

FVField build_initial_wavepacket(const WavepacketSpec& spec, const Grid1D& grid,
                                 const Units& units) {
  validate(units);
  validate_packet(spec);
  const double dx = grid.dx();
  if (!(dx < spec.sigma / 8.0)) {
    throw PreconditionError(
        "grid too coarse for the packet envelope: need dx < sigma/8");
  }
  if (spec.p0 != 0.0 && !(dx < units.hbar / (4.0 * std::abs(spec.p0)))) {
    throw PreconditionError(
        "grid too coarse for the carrier wave: need dx < hbar/(4|p0|)");
  }

  const int n = grid.n_points();
  std::vector<Complex> psi(static_cast<std::size_t>(n));
  const Complex i(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    const double x = grid.point(k);
    const double env = std::exp(-(x - spec.x0) * (x - spec.x0) /
                                (4.0 * spec.sigma * spec.sigma));
    psi[static_cast<std::size_t>(k)] =
        spec.amplitude * env * std::exp(i * (spec.p0 * x / units.hbar));
  }

  // Rotate every Fourier mode with its own positive-branch frequency:
  // psi_dot = IFFT[ -i E(p)/hbar FFT[psi] ]. This is what makes the packet
  // purely positive-energy rather than a mix of both branches.
  std::vector<Complex> psi_hat = fft(psi);
  const std::vector<double> momenta = fft_momenta(grid, units);
  for (std::size_t j = 0; j < psi_hat.size(); ++j) {
    const double E = free_energy(momenta[j], units);
    psi_hat[j] *= Complex(0.0, -E / units.hbar);
  }
  const std::vector<Complex> psi_dot = ifft(psi_hat);

  const KGState state{grid, std::move(psi), psi_dot};
  const std::vector<double> zero_potential(static_cast<std::size_t>(n), 0.0);
  return decompose(state, zero_potential, units);
}

double max_stable_dt(const Grid1D& grid, const Units& units) {
  validate(units);
  return grid.dx() / units.c;
}

// ---------------------------------------------------------------------------
// Crank-Nicolson stepper for the coupled (phi, chi) system.
//
// With g = hbar^2 / (m dx^2) the discrete Hamiltonian has 2x2 blocks
//   diag_k = [ mc^2 + V_k + g        g       ]
//            [      -g         -mc^2 + V_k - g ]
//   off    = [ -g/2  -g/2 ]   (same block to both neighbours)
//            [  g/2   g/2 ]
// and tau3 diag(1,-1) pseudo-hermiticity tau3 H^dag tau3 = H holds blockwise,
// which is exactly why the Cayley update conserves sum(|phi|^2 - |chi|^2).
//
// The left matrix (I + i a H), a = dt/(2 hbar), is constant in time, so its
// block-Thomas elimination (the C_k = M_k^{-1} off blocks and the M_k^{-1}
// factors) is precomputed once; each step only assembles the right-hand side
// and runs the O(n) forward/back sweeps.
// ---------------------------------------------------------------------------

namespace {

struct Block {  // row-major 2x2 complex block
  Complex a, b, c, d;
};

inline Block mul(const Block& x, const Block& y) {
  return {x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
          x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
}

inline Block sub(const Block& x, const Block& y) {
  return {x.a - y.a, x.b - y.b, x.c - y.c, x.d - y.d};
}

inline Block inverse(const Block& x) {
  const Complex det = x.a * x.d - x.b * x.c;
  if (std::abs(det) == 0.0) {
    throw NumericalError("singular block in the Crank-Nicolson elimination");
  }
  const Complex inv_det = 1.0 / det;
  return {x.d * inv_det, -x.b * inv_det, -x.c * inv_det, x.a * inv_det};
}

inline void apply(const Block& x, Complex& u, Complex& v) {
  const Complex r0 = x.a * u + x.b * v;
  const Complex r1 = x.c * u + x.d * v;
  u = r0;
  v = r1;
}

}  // namespace

struct CrankNicolsonStepper::Impl {
  Grid1D grid;
  Units units;
  double dt;
  double g;   // hbar^2 / (m dx^2)
  Complex ia;  // i dt / (2 hbar)
  std::vector<double> V;
  std::vector<Block> c_blocks;   // precomputed C_k = M_k^{-1} * off
  std::vector<Block> m_inverse;  // precomputed M_k^{-1}
  Block off;                     // (I + ia H) off-diagonal block
  std::vector<Complex> rhs_phi, rhs_chi, sum, lap;
  long long steps_taken = 0;

  Impl(const Grid1D& grid_in, const std::vector<double>& potential, double dt_in,
       const Units& units_in)
      : grid(grid_in), units(units_in), dt(dt_in), V(potential) {
    validate(units);
    if (static_cast<int>(V.size()) != grid.n_points()) {
      throw PreconditionError("potential samples do not match the grid");
    }
    for (double v : V) {
      if (!std::isfinite(v)) {
        throw PreconditionError("potential samples must be finite");
      }
    }
    if (!(std::isfinite(dt) && dt > 0.0)) {
      throw PreconditionError("dt must be finite and > 0");
    }
    if (dt > max_stable_dt(grid, units) * (1.0 + 1e-12)) {
      throw NumericalError(
          "time step refused: dt exceeds dx/c (one light-crossing per cell); "
          "shrink dt or coarsen the grid");
    }

    const double dx = grid.dx();
    g = units.hbar * units.hbar / (units.m * dx * dx);
    ia = Complex(0.0, dt / (2.0 * units.hbar));
    const double mc2 = units.rest_energy();

    const std::size_t n = V.size();
    off = Block{-ia * (0.5 * g), -ia * (0.5 * g), ia * (0.5 * g),
                ia * (0.5 * g)};
    c_blocks.resize(n);
    m_inverse.resize(n);
    rhs_phi.resize(n);
    rhs_chi.resize(n);
    sum.resize(n);
    lap.resize(n);

    // Forward elimination of the constant left matrix.
    Block prev_c{};
    for (std::size_t k = 0; k < n; ++k) {
      const Block diag{Complex(1.0, 0.0) + ia * (mc2 + V[k] + g), ia * g,
                       -ia * g, Complex(1.0, 0.0) + ia * (-mc2 + V[k] - g)};
      const Block m = (k == 0) ? diag : sub(diag, mul(off, prev_c));
      m_inverse[k] = inverse(m);
      c_blocks[k] = mul(m_inverse[k], off);
      prev_c = c_blocks[k];
    }
  }

  void advance(FVField& field) {
    const std::size_t n = V.size();
    if (field.grid != grid || field.phi.size() != n || field.chi.size() != n) {
      throw PreconditionError("field does not match the stepper's grid");
    }
    const double dx = grid.dx();
    const double inv_dx2 = 1.0 / (dx * dx);
    const double mc2 = units.rest_energy();
    auto& phi = field.phi;
    auto& chi = field.chi;

    // rhs = (I - ia H) u, Dirichlet zero ghosts on psi = phi + chi.
    for (std::size_t k = 0; k < n; ++k) sum[k] = phi[k] + chi[k];
    for (std::size_t k = 0; k < n; ++k) {
      const Complex left = (k == 0) ? Complex{} : sum[k - 1];
      const Complex right = (k + 1 == n) ? Complex{} : sum[k + 1];
      lap[k] = (left - 2.0 * sum[k] + right) * inv_dx2;
    }
    const double hh_2m = 0.5 * units.hbar * units.hbar / units.m;
    for (std::size_t k = 0; k < n; ++k) {
      const Complex h_phi = (mc2 + V[k]) * phi[k] - hh_2m * lap[k];
      const Complex h_chi = (-mc2 + V[k]) * chi[k] + hh_2m * lap[k];
      rhs_phi[k] = phi[k] - ia * h_phi;
      rhs_chi[k] = chi[k] - ia * h_chi;
    }

    // Forward sweep: d_k = M_k^{-1} (rhs_k - off * d_{k-1}).
    for (std::size_t k = 0; k < n; ++k) {
      Complex u = rhs_phi[k];
      Complex v = rhs_chi[k];
      if (k > 0) {
        u -= off.a * rhs_phi[k - 1] + off.b * rhs_chi[k - 1];
        v -= off.c * rhs_phi[k - 1] + off.d * rhs_chi[k - 1];
      }
      apply(m_inverse[k], u, v);
      rhs_phi[k] = u;  // reuse the rhs arrays as the d_k storage
      rhs_chi[k] = v;
    }

    // Back substitution: u_k = d_k - C_k u_{k+1}.
    phi[n - 1] = rhs_phi[n - 1];
    chi[n - 1] = rhs_chi[n - 1];
    for (std::size_t k = n - 1; k-- > 0;) {
      const Block& c = c_blocks[k];
      phi[k] = rhs_phi[k] - (c.a * phi[k + 1] + c.b * chi[k + 1]);
      chi[k] = rhs_chi[k] - (c.c * phi[k + 1] + c.d * chi[k + 1]);
    }

    ++steps_taken;
    for (std::size_t k = 0; k < n; ++k) {
      if (!std::isfinite(phi[k].real()) || !std::isfinite(phi[k].imag()) ||
          !std::isfinite(chi[k].real()) || !std::isfinite(chi[k].imag())) {
        throw NumericalError("non-finite field value after time step " +
                             std::to_string(steps_taken));
      }
    }
  }
};

CrankNicolsonStepper::CrankNicolsonStepper(const Grid1D& grid,
                                           const std::vector<double>& potential,
                                           double dt, const Units& units)
    : impl_(std::make_unique<Impl>(grid, potential, dt, units)) {}

CrankNicolsonStepper::~CrankNicolsonStepper() = default;

void CrankNicolsonStepper::advance(FVField& field) { impl_->advance(field); }

FVField step_evolve(const FVField& field, const PotentialProfile& potential,
                    double dt, const Units& units) {
  CrankNicolsonStepper stepper(field.grid, sample_potential(potential, field.grid),
                               dt, units);
  FVField out = field;
  stepper.advance(out);
  return out;
}

namespace {

std::vector<double> absorbing_mask(const Grid1D& grid) {
  const int n = grid.n_points();
  std::vector<double> mask(static_cast<std::size_t>(n), 1.0);
  const double span = grid.x_max() - grid.x_min();
  const double layer = 0.1 * span;
  for (int k = 0; k < n; ++k) {
    const double x = grid.point(k);
    const double from_left = x - grid.x_min();
    const double from_right = grid.x_max() - x;
    const double edge = std::min(from_left, from_right);
    if (edge < layer) {
      const double depth = 1.0 - edge / layer;  // 0 at inner rim, 1 at wall
      // Gentle per-step damping; compounds over the run.
      mask[static_cast<std::size_t>(k)] =
          std::pow(std::cos(0.5 * std::numbers::pi * depth), 0.125);
    }
  }
  return mask;
}

}  // namespace

SimulationRecord run_simulation(const WavepacketSpec& packet,
                                const PotentialProfile& potential,
                                const Grid1D& grid, double t_final, double dt,
                                const Units& units, const RunOptions& options) {
  validate(units);
  validate_profile(potential);
  if (!(std::isfinite(t_final) && t_final >= 0.0)) {
    throw PreconditionError("t_final must be finite and >= 0");
  }
  if (options.record_every < 1) {
    throw PreconditionError("record_every must be >= 1");
  }
  if (options.snapshot_every < 0) {
    throw PreconditionError("snapshot_every must be >= 0");
  }
  if (potential.V0 != 0.0 &&
      !(std::abs(packet.x0 - potential.center) > 5.0 * packet.sigma)) {
    throw PreconditionError(
        "packet overlaps the step: need |x0 - center| > 5 sigma so the "
        "incident state is cleanly on one side");
  }

  const std::vector<double> V = sample_potential(potential, grid);
  FVField field = build_initial_wavepacket(packet, grid, units);
  CrankNicolsonStepper stepper(grid, V, dt, units);

  std::vector<double> mask;
  if (options.absorbing_boundary) mask = absorbing_mask(grid);

  const int split = grid.nearest_index(potential.center);
  SimulationRecord record;

  auto record_row = [&](double t) {
    const std::vector<double> rho = charge_density(field);
    record.times.push_back(t);
    record.Q_total.push_back(trapezoid(rho, grid));
    // Split trapezoids sharing the point x_split, so left + right recovers
    // the full integral up to summation order.
    double q_left = 0.5 * (rho.front() + rho[static_cast<std::size_t>(split)]);
    for (int k = 1; k < split; ++k) q_left += rho[static_cast<std::size_t>(k)];
    record.Q_left.push_back(q_left * grid.dx());
    double q_right =
        0.5 * (rho[static_cast<std::size_t>(split)] + rho.back());
    for (int k = split + 1; k + 1 < grid.n_points(); ++k) {
      q_right += rho[static_cast<std::size_t>(k)];
    }
    record.Q_right.push_back(q_right * grid.dx());
    double m = 0.0;
    for (std::size_t k = 0; k < field.phi.size(); ++k) {
      m = std::max(m, std::abs(field.phi[k] + field.chi[k]));
    }
    record.max_abs_psi.push_back(m);
  };

  const long long n_steps =
      (t_final == 0.0)
          ? 0
          : static_cast<long long>(std::ceil(t_final / dt - 1e-12));

  record_row(0.0);
  if (options.snapshot_every > 0) record.snapshots.push_back({0.0, field});

  for (long long j = 1; j <= n_steps; ++j) {
    stepper.advance(field);
    if (!mask.empty()) {
      for (std::size_t k = 0; k < mask.size(); ++k) {
        field.phi[k] *= mask[k];
        field.chi[k] *= mask[k];
      }
    }
    const double t = static_cast<double>(j) * dt;
    if (j % options.record_every == 0 || j == n_steps) record_row(t);
    if (options.snapshot_every > 0 &&
        (j % options.snapshot_every == 0 || j == n_steps)) {
      record.snapshots.push_back({t, field});
    }
  }
  return record;
}

}  // namespace kgfv
