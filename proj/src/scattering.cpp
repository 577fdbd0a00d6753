#include "kgfv/scattering.hpp"

#include <cmath>

#include "kgfv/errors.hpp"

namespace kgfv {

Complex PlaneWave::label_momentum() const {
  return kind == ParticleKind::Particle ? momentum : -momentum;
}

double PlaneWave::label_energy() const {
  return kind == ParticleKind::Particle ? energy : -energy;
}

Complex PlaneWave::evaluate(double x, double t, const Units& units) const {
  validate(units);
  const Complex i(0.0, 1.0);
  const Complex phase = (label_momentum() * x - label_energy() * t) / units.hbar;
  return amplitude * std::exp(i * phase);
}

const char* to_string(Regime regime) {
  switch (regime) {
    case Regime::Transmission: return "Transmission";
    case Regime::Evanescent: return "Evanescent";
    case Regime::KleinZone: return "KleinZone";
  }
  return "?";
}

namespace {

void require_propagating(double E, const Units& units) {
  if (!std::isfinite(E) || E <= units.rest_energy()) {
    throw PreconditionError(
        "incident energy must exceed the rest energy (no propagating wave "
        "otherwise)");
  }
}

}  // namespace

Regime classify_regime(double E, double V0, const Units& units) {
  validate(units);
  require_propagating(E, units);
  if (!std::isfinite(V0)) throw PreconditionError("V0 must be finite");
  const double mc2 = units.rest_energy();
  if (V0 < E - mc2) return Regime::Transmission;
  if (V0 > E + mc2) return Regime::KleinZone;
  // Boundaries V0 = E -+ mc^2 (p' = 0) belong to the evanescent window.
  return Regime::Evanescent;
}

Complex select_branch(double E, double V0, const Units& units) {
  const Regime regime = classify_regime(E, V0, units);
  const Complex principal = momentum_from_energy(E, V0, units);
  // Principal value is already the right branch for transmission (+real:
  // rightward group velocity) and evanescence (+i kappa: decay for x > 0).
  // In the Klein zone the group velocity v_g = p' c^2 / (E - V0) must point
  // away from the step (+x) while E - V0 < 0, so p' takes the negative root.
  // (p' is real there; avoid negating the zero imaginary part to -0.)
  if (regime == Regime::KleinZone) return Complex(-principal.real(), 0.0);
  return principal;
}

ScatteringSolution solve_step(double E, double V0, const Units& units) {
  ScatteringSolution s;
  s.E = E;
  s.V0 = V0;
  s.regime = classify_regime(E, V0, units);
  s.p = momentum_from_energy(E, 0.0, units).real();
  s.p_prime = select_branch(E, V0, units);

  const Complex denom = s.p + s.p_prime;
  if (std::abs(denom) == 0.0) {
    // Klein zone with V0 = 2E: p' = -p and the matching system is singular
    // (the incident wave cannot be normalized against the transmitted one).
    throw NumericalError(
        "singular step matching: p + p' = 0 (V0 = 2E), amplitude ratios "
        "diverge");
  }
  s.b_over_a = (s.p - s.p_prime) / denom;
  s.bprime_over_a = (2.0 * s.p) / denom;
  s.R = std::norm(s.b_over_a);
  s.T = s.p_prime.real() * std::norm(s.bprime_over_a) / s.p;
  return s;
}

StepDensities plane_wave_densities(const ScatteringSolution& s, Complex a,
                                   const Units& units) {
  validate(units);
  if (!(std::isfinite(a.real()) && std::isfinite(a.imag())) ||
      std::norm(a) == 0.0) {
    throw PreconditionError("incident amplitude must be finite and nonzero");
  }
  const double mc2 = units.rest_energy();
  const double a2 = std::norm(a);
  const double b2 = std::norm(s.b_over_a) * a2;
  const double bp2 = std::norm(s.bprime_over_a) * a2;

  StepDensities d;
  d.rho_i = (s.E / mc2) * a2;
  d.j_i = (s.p / units.m) * a2;
  d.rho_r = (s.E / mc2) * b2;
  d.j_r = -(s.p / units.m) * b2;
  // Transmitted side: local energy E - V0 sets the density sign; only the
  // real (propagating) part of p' carries flux. Both are negative in the
  // Klein zone and zero-flux in the evanescent window.
  d.rho_t = ((s.E - s.V0) / mc2) * bp2;
  d.j_t = (s.p_prime.real() / units.m) * bp2;
  return d;
}

PlaneWave relabel_transmitted(const ScatteringSolution& s, Complex a) {
  if (s.regime != Regime::KleinZone) {
    throw PreconditionError(
        "relabel_transmitted: only the Klein-zone transmitted wave is an "
        "antiparticle mode");
  }
  PlaneWave w;
  w.amplitude = s.bprime_over_a * a;
  // Observed by a detector on the far side: an antiparticle of positive
  // energy V0 - E moving in +x with momentum |p'|.
  w.momentum = Complex(std::abs(s.p_prime.real()), 0.0);
  w.energy = s.V0 - s.E;
  w.kind = ParticleKind::Antiparticle;
  return w;
}

std::vector<SweepEntry> sweep_reflectivity(double E,
                                           const std::vector<double>& V0_values,
                                           const Units& units) {
  validate(units);
  require_propagating(E, units);
  std::vector<SweepEntry> entries;
  entries.reserve(V0_values.size());
  for (double v0 : V0_values) {
    SweepEntry e;
    e.V0 = v0;
    try {
      e.solution = solve_step(E, v0, units);
      e.ok = true;
    } catch (const Error& err) {
      e.ok = false;
      e.error = err.what();
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

}  // namespace kgfv
