#pragma once

#include <string>
#include <vector>

#include "kgfv/units.hpp"

namespace kgfv {

enum class ParticleKind { Particle, Antiparticle };

// A single plane-wave mode labelled the way an observer on its side of the
// barrier would label it. `momentum` and `energy` are the *observed*
// (physical) values; for an antiparticle the phase runs with the opposite
// sign, exp[-i(px - Et)/hbar], so observed and label values differ by a sign.
struct PlaneWave {
  Complex amplitude{1.0, 0.0};
  Complex momentum{0.0, 0.0};  // observed momentum (real for free waves)
  double energy = 0.0;         // observed energy, > 0
  ParticleKind kind = ParticleKind::Particle;

  // Label (wavefunction) momentum/energy: equal to the observed values for a
  // particle, their negatives for an antiparticle.
  Complex label_momentum() const;
  double label_energy() const;

  // amplitude * exp[ i s (label_p x - label_E t) / hbar ] with s = +1; the
  // antiparticle sign is already folded into the labels.
  Complex evaluate(double x, double t, const Units& units) const;
};

// Sharp potential step of height V0 at x = 0: V(x) = V0 * theta(x).
struct StepPotential {
  double V0 = 0.0;
};

// The three kinematic regimes of step scattering at incident energy E:
//   Transmission: V0 < E - mc^2          (propagating transmitted wave)
//   Evanescent:   E - mc^2 <= V0 <= E + mc^2  (decaying transmitted tail, R = 1)
//   KleinZone:    V0 > E + mc^2          (supercritical step: R > 1, T < 0)
enum class Regime { Transmission, Evanescent, KleinZone };

const char* to_string(Regime regime);

// Classifies the step. Requires E > mc^2 (a propagating incident wave).
Regime classify_regime(double E, double V0, const Units& units);

// Transmitted-side momentum p' with the physically correct branch:
//   Transmission: p' real > 0 (outgoing group velocity)
//   Evanescent:   p' = +i kappa (decay, not growth, for x > 0)
//   KleinZone:    p' real < 0 (group velocity points away from the step even
//                 though the phase velocity points toward it)
Complex select_branch(double E, double V0, const Units& units);

// Full solution of the sharp-step matching problem for unit incident
// amplitude. b/a is the reflected and b'/a the transmitted amplitude ratio:
//   b/a = (p - p') / (p + p'),   b'/a = 2p / (p + p').
struct ScatteringSolution {
  double E = 0.0;
  double V0 = 0.0;
  double p = 0.0;           // incident momentum, real > 0
  Complex p_prime;          // transmitted momentum on the selected branch
  Complex b_over_a;         // reflected amplitude ratio
  Complex bprime_over_a;    // transmitted amplitude ratio
  double R = 0.0;           // reflectivity |b/a|^2
  double T = 0.0;           // transmissivity Re(p') |b'/a|^2 / p (flux ratio)
  Regime regime = Regime::Transmission;
};

// Throws PreconditionError if E <= mc^2, and NumericalError at the singular
// matching point p + p' = 0 (V0 = 2E inside the Klein zone), where the
// amplitude ratios diverge.
ScatteringSolution solve_step(double E, double V0, const Units& units);

// Charge density and current carried by each of the three waves for incident
// amplitude a:
//   rho_i = (E/mc^2)|a|^2          j_i = (p/m)|a|^2
//   rho_r = (E/mc^2)|b|^2          j_r = -(p/m)|b|^2
//   rho_t = ((E-V0)/mc^2)|b'|^2    j_t = (Re p'/m)|b'|^2
// In the Klein zone rho_t and j_t are both negative: a negative-charge wave
// moving right carries the (negative) transmitted flux.
struct StepDensities {
  double rho_i = 0.0, j_i = 0.0;
  double rho_r = 0.0, j_r = 0.0;
  double rho_t = 0.0, j_t = 0.0;
};

StepDensities plane_wave_densities(const ScatteringSolution& solution,
                                   Complex a, const Units& units);

// Reinterprets the Klein-zone transmitted wave as what it physically is: an
// antiparticle observed with positive energy E_obs = V0 - E and momentum
// p_obs = |p'| moving in +x. Only valid in the Klein zone.
PlaneWave relabel_transmitted(const ScatteringSolution& solution, Complex a);

// One row of a reflectivity sweep. Entries where solve_step failed (e.g. the
// V0 = 2E singularity) carry the error message instead of a solution.
struct SweepEntry {
  double V0 = 0.0;
  bool ok = false;
  ScatteringSolution solution;  // valid only when ok
  std::string error;            // non-empty only when !ok
};

// Solves the step for each V0 in turn; per-entry failures are recorded, not
// thrown, so one singular point does not abort a whole sweep.
std::vector<SweepEntry> sweep_reflectivity(double E,
                                           const std::vector<double>& V0_values,
                                           const Units& units);

}  // namespace kgfv
