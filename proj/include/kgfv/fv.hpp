#pragma once

#include <vector>

#include "kgfv/grid.hpp"
#include "kgfv/units.hpp"

namespace kgfv {

// Second-order form of a Klein-Gordon field on a grid: the wavefunction and
// its time derivative, the pair needed to pose an initial-value problem.
struct KGState {
  Grid1D grid;
  std::vector<Complex> psi;      // psi(x_k)
  std::vector<Complex> psi_dot;  // d psi/dt (x_k)
};

// Two-component (phi, chi) form of the same field. For a free positive-energy
// state phi carries almost all of the amplitude and chi is the small
// companion component; for negative-energy (antiparticle) states the roles
// swap. The charge density |phi|^2 - |chi|^2 is the conserved density.
struct FVField {
  Grid1D grid;
  std::vector<Complex> phi;
  std::vector<Complex> chi;
};

// Maps (psi, psi_dot) to (phi, chi) in the presence of a static potential V:
//   phi = 1/2 [ (1 - V/mc^2) psi + (i hbar / mc^2) psi_dot ]
//   chi = 1/2 [ (1 + V/mc^2) psi - (i hbar / mc^2) psi_dot ]
// so that phi + chi = psi identically (up to rounding).
// V must be sampled on the same grid (one value per point).
FVField decompose(const KGState& state, const std::vector<double>& potential,
                  const Units& units);

// Inverse map:  psi = phi + chi,
//               i hbar psi_dot = mc^2 (phi - chi) + V (phi + chi).
// decompose followed by recompose reproduces the input to machine precision.
KGState recompose(const FVField& field, const std::vector<double>& potential,
                  const Units& units);

// Charge density rho_k = |phi_k|^2 - |chi_k|^2. Signed: negative where the
// field is antiparticle-dominated. Not a probability density.
std::vector<double> charge_density(const FVField& field);

// The same density computed from the second-order form,
//   rho = (i hbar / 2 mc^2) (psi* psi_dot - psi_dot* psi) - (V/mc^2)|psi|^2,
// equal to |phi|^2 - |chi|^2 by construction. Kept as an independent
// implementation so the two can be cross-checked.
std::vector<double> charge_density(const KGState& state,
                                   const std::vector<double>& potential,
                                   const Units& units);

// Charge current j = (i hbar / 2m) (psi grad psi* - psi* grad psi)
//                  = (hbar / m) Im(psi* dpsi/dx).
// Central differences in the interior, second-order one-sided stencils at
// the two boundary points. Needs n_points >= 3.
std::vector<double> current_density(const KGState& state, const Units& units);

// Total charge Q = integral of rho dx (trapezoidal).
double total_charge(const std::vector<double>& rho, const Grid1D& grid);
double total_charge(const FVField& field);

// Component-weight ratio  int |chi|^2 dx / int |phi|^2 dx, a scalar measure
// of antiparticle-component admixture; < 1 for particle-dominated states
// (for a free plane wave of energy E it is ((E - mc^2)/(E + mc^2))^2, e.g.
// 1/81 at E = 1.25 mc^2). Requires a nonvanishing phi component.
double chi_phi_ratio(const FVField& field);

}  // namespace kgfv
