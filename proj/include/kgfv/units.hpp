#pragma once

#include <complex>

namespace kgfv {

using Complex = std::complex<double>;

// Unit system carried explicitly through every formula so that none of the
// physics silently assumes hbar = c = m = 1. The default-constructed value
// *is* natural units; override members for dimensional runs.
struct Units {
  double hbar = 1.0;  // reduced Planck constant
  double c = 1.0;     // speed of light
  double m = 1.0;     // particle mass

  // Rest energy m c^2, the scale that separates particle and antiparticle
  // branches throughout.
  double rest_energy() const { return m * c * c; }

  // Compton momentum m c, the scale at which motion turns relativistic.
  double compton_momentum() const { return m * c; }
};

// Natural units hbar = c = m = 1 (so mc^2 = 1 and mc = 1).
inline Units natural_units() { return Units{}; }

// Throws PreconditionError unless all three constants are finite and > 0.
void validate(const Units& units);

// Relativistic momentum at total energy E in a region of constant
// potential V: p'^2 c^2 = (E - V)^2 - (m c^2)^2.
//
// Returns the principal value: real and >= 0 when (E-V)^2 >= (mc^2)^2,
// otherwise purely imaginary with positive imaginary part (an evanescent
// decay constant). Any regime-dependent sign flip — in particular the
// negative branch inside the Klein zone — is applied by the scattering
// module, not here.
Complex momentum_from_energy(double energy, double potential,
                             const Units& units);

// Free-particle dispersion E(p) = sqrt(p^2 c^2 + m^2 c^4), positive branch.
double free_energy(double p, const Units& units);

// Group velocity dE/dp = p c^2 / E(p) of the positive branch. Bounded by c.
double group_velocity(double p, const Units& units);

}  // namespace kgfv
