#pragma once

#include <cstdint>
#include <vector>

#include "kgfv/fv.hpp"
#include "kgfv/grid.hpp"
#include "kgfv/scattering.hpp"
#include "kgfv/units.hpp"

namespace kgfv {

// One-particle operators entering the two-particle commutator checks.
// The conjugate pair acts on antiparticle wavefunctions: because the phase of
// an antiparticle mode runs backwards, the operators that return its
// *observed* momentum/energy carry the opposite i:
//   p_hat   = -i hbar d/dx     E_hat   = +i hbar d/dt
//   p_hat_c = +i hbar d/dx     E_hat_c = -i hbar d/dt
enum class OperatorKind {
  Position,            // multiply by x
  Momentum,            // -i hbar d/dx
  MomentumConjugate,   // +i hbar d/dx
  Energy,              // +i hbar d/dt   (plane-wave eigenvalue arithmetic only)
  EnergyConjugate      // -i hbar d/dt   (plane-wave eigenvalue arithmetic only)
};

// One additive term of a two-particle operator: coefficient * op(particle).
// particle is 1 or 2.
struct OperatorTerm {
  OperatorKind kind = OperatorKind::Position;
  int particle = 1;
  Complex coefficient{1.0, 0.0};
};

// A sum of terms, e.g. {x(1), -x(2)} for the separation x1 - x2 or
// {p(1), p_c(2)} for the mixed-convention total momentum.
using OperatorExpr = std::vector<OperatorTerm>;

// Convenience builders.
OperatorExpr separation_operator();               // x1 - x2
OperatorExpr sum_position_operator();             // x1 + x2
OperatorExpr total_momentum_operator();           // p1 + p2 (both standard)
OperatorExpr mixed_total_momentum_operator();     // p1 + p2 with p2 conjugate

// Two-particle test function kept in separable form,
//   f(x1, x2) = sum_r g_r(x1) h_r(x2),
// with both factors sampled on the same grid. Derivatives act factor-wise and
// inner products reduce to Gram matrices, so the full n x n tensor product is
// never materialized — n = 2048 and beyond stay cheap.
struct SeparableFunction {
  struct Term {
    std::vector<Complex> g;  // x1 factor
    std::vector<Complex> h;  // x2 factor
  };
  Grid1D grid;
  std::vector<Term> terms;
};

// Normalized product of two Gaussians g(x1; c1, s1) * h(x2; c2, s2).
SeparableFunction gaussian_product(const Grid1D& grid, double c1, double s1,
                                   double c2, double s2);

// Sum of `count` random Gaussian products with centers in [-spread, spread]
// and widths in [w_min, w_max], drawn deterministically from `seed`.
SeparableFunction random_gaussian_sum(const Grid1D& grid, int count,
                                      double spread, double w_min, double w_max,
                                      std::uint64_t seed);

// Applies an operator expression (Position / Momentum / MomentumConjugate
// terms only; Energy kinds have no grid representation here and throw
// PreconditionError). Derivatives use central differences in the interior
// and second-order one-sided stencils at the boundary points.
SeparableFunction apply_operator(const OperatorExpr& op,
                                 const SeparableFunction& f,
                                 const Units& units);

// L2 norm sqrt(int int |f|^2 dx1 dx2) via Gram matrices (trapezoidal).
double l2_norm(const SeparableFunction& f);

// Worst-case relative commutator residual
//   max_f  ||(AB - BA) f|| / ||f||
// over the supplied test functions. For commuting pairs such as
// [x1 - x2, p1 + p2] the exact answer is 0 and the returned value is pure
// discretization error, O(dx^2).
double commutator_residual(const OperatorExpr& A, const OperatorExpr& B,
                           const std::vector<SeparableFunction>& test_functions,
                           const Units& units);

// The two correlation patterns of a particle-antiparticle pair built from a
// single particle mode (p1, E1):
//   OppositeMomentaFixedSeparation: partner *labelled* (-p1, -E1), so the
//     label momenta sum to zero and the separation x1 - x2 is compatible with
//     it; observed, both constituents move with the same momentum p1.
//   OppositePositionsFixedTotalMomentum: partner labelled (p1, -E1), sharp
//     label total momentum 2 p1; observed, the pair flies apart with
//     momenta +p1 and -p1.
enum class PairRelation {
  OppositeMomentaFixedSeparation,
  OppositePositionsFixedTotalMomentum
};

struct EPRPair {
  PlaneWave wave1;  // particle
  PlaneWave wave2;  // antiparticle partner
  PairRelation relation = PairRelation::OppositeMomentaFixedSeparation;
};

// Builds the pair from the particle momentum p1, with
// E1 = sqrt(p1^2 c^2 + m^2 c^4). wave1 is a particle observed at (p1, E1);
// wave2 is the antiparticle whose *observed* values are (p1, E1) for the
// fixed-separation relation and (-p1, E1) for the fixed-total-momentum one.
// p1 = 0 is a degenerate pair for the fixed-separation relation
// (PreconditionError); the fixed-total-momentum relation allows it.
EPRPair build_epr_pair(double p1, PairRelation relation, const Units& units);

// Result of acting with the conjugate operators on an antiparticle mode:
// the eigenvalues of p_hat_c and E_hat_c, i.e. the observed momentum and
// energy. Pure eigenvalue arithmetic on the labels — no discretization.
struct ObservedValues {
  double momentum = 0.0;
  double energy = 0.0;
};

// Requires an antiparticle wave (PreconditionError otherwise): the standard
// operators already return the observed values of a particle.
ObservedValues apply_conjugate_operators(const PlaneWave& wave,
                                         const Units& units);

// Space-time inversion x -> -x, t -> -t. On a plane wave it swaps the
// particle/antiparticle reading while leaving amplitude and observed (p, E)
// untouched: a particle's phase at (-x, -t) is an antiparticle's at (x, t).
// Involutive.
PlaneWave spacetime_inversion(const PlaneWave& wave);

// Grid version: phi and chi swap roles and space reverses,
//   phi'(x) = chi(-x),  chi'(x) = phi(-x).
// Requires a grid symmetric about x = 0 (PreconditionError otherwise) so the
// reversal is an exact index permutation. Applying it twice restores the
// field bit-for-bit; total charge flips sign.
FVField spacetime_inversion(const FVField& field);

}  // namespace kgfv
