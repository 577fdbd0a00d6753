#include "kgfv/units.hpp"

#include <cmath>

#include "kgfv/errors.hpp"

namespace kgfv {

void validate(const Units& units) {
  const bool ok = std::isfinite(units.hbar) && units.hbar > 0.0 &&
                  std::isfinite(units.c) && units.c > 0.0 &&
                  std::isfinite(units.m) && units.m > 0.0;
  if (!ok) {
    throw PreconditionError(
        "unit constants hbar, c, m must all be finite and positive");
  }
}

Complex momentum_from_energy(double energy, double potential,
                             const Units& units) {
  validate(units);
  if (!std::isfinite(energy) || !std::isfinite(potential)) {
    throw PreconditionError("energy and potential must be finite");
  }
  const double kinetic = energy - potential;
  const double mc2 = units.rest_energy();
  // p^2 c^2 = (E - V)^2 - (mc^2)^2, factored to avoid needless cancellation.
  const double p2c2 = (kinetic - mc2) * (kinetic + mc2);
  if (p2c2 >= 0.0) {
    return Complex(std::sqrt(p2c2) / units.c, 0.0);
  }
  return Complex(0.0, std::sqrt(-p2c2) / units.c);
}

double free_energy(double p, const Units& units) {
  validate(units);
  if (!std::isfinite(p)) throw PreconditionError("momentum must be finite");
  const double pc = p * units.c;
  const double mc2 = units.rest_energy();
  return std::hypot(pc, mc2);
}

double group_velocity(double p, const Units& units) {
  return p * units.c * units.c / free_energy(p, units);
}

}  // namespace kgfv
