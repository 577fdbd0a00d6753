#include "kgfv/epr.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "kgfv/errors.hpp"

namespace kgfv {

OperatorExpr separation_operator() {
  return {{OperatorKind::Position, 1, {1.0, 0.0}},
          {OperatorKind::Position, 2, {-1.0, 0.0}}};
}

OperatorExpr sum_position_operator() {
  return {{OperatorKind::Position, 1, {1.0, 0.0}},
          {OperatorKind::Position, 2, {1.0, 0.0}}};
}

OperatorExpr total_momentum_operator() {
  return {{OperatorKind::Momentum, 1, {1.0, 0.0}},
          {OperatorKind::Momentum, 2, {1.0, 0.0}}};
}

OperatorExpr mixed_total_momentum_operator() {
  return {{OperatorKind::Momentum, 1, {1.0, 0.0}},
          {OperatorKind::MomentumConjugate, 2, {1.0, 0.0}}};
}

SeparableFunction gaussian_product(const Grid1D& grid, double c1, double s1,
                                   double c2, double s2) {
  if (!(s1 > 0.0 && s2 > 0.0)) {
    throw PreconditionError("gaussian_product: widths must be > 0");
  }
  SeparableFunction f{grid, {}};
  SeparableFunction::Term term;
  const auto n = static_cast<std::size_t>(grid.n_points());
  term.g.resize(n);
  term.h.resize(n);
  // int |exp(-(x-c)^2 / 2s^2)|^2 dx = s sqrt(pi), so dividing each factor by
  // sqrt(s sqrt(pi)) makes the product unit-norm (up to truncated tails).
  const double g_scale = 1.0 / std::sqrt(s1 * std::sqrt(std::numbers::pi));
  const double h_scale = 1.0 / std::sqrt(s2 * std::sqrt(std::numbers::pi));
  for (int k = 0; k < grid.n_points(); ++k) {
    const double x = grid.point(k);
    const auto idx = static_cast<std::size_t>(k);
    term.g[idx] = g_scale * std::exp(-(x - c1) * (x - c1) / (2.0 * s1 * s1));
    term.h[idx] = h_scale * std::exp(-(x - c2) * (x - c2) / (2.0 * s2 * s2));
  }
  f.terms.push_back(std::move(term));
  return f;
}

SeparableFunction random_gaussian_sum(const Grid1D& grid, int count,
                                      double spread, double w_min, double w_max,
                                      std::uint64_t seed) {
  if (count < 1) throw PreconditionError("random_gaussian_sum: count must be >= 1");
  if (!(w_min > 0.0 && w_max >= w_min)) {
    throw PreconditionError("random_gaussian_sum: need 0 < w_min <= w_max");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> center(-spread, spread);
  std::uniform_real_distribution<double> width(w_min, w_max);
  SeparableFunction f{grid, {}};
  for (int r = 0; r < count; ++r) {
    // Draw in a fixed order so the function is reproducible from the seed.
    const double c1 = center(rng), c2 = center(rng);
    const double s1 = width(rng), s2 = width(rng);
    SeparableFunction part = gaussian_product(grid, c1, s1, c2, s2);
    f.terms.push_back(std::move(part.terms.front()));
  }
  return f;
}

namespace {

// d/dx with central differences inside and second-order one-sided stencils
// at the two ends (same scheme as the current density).
std::vector<Complex> derivative(const std::vector<Complex>& f, double dx) {
  const std::size_t n = f.size();
  if (n < 3) throw PreconditionError("derivative: needs at least 3 points");
  std::vector<Complex> d(n);
  d[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * dx);
  d[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * dx);
  for (std::size_t k = 1; k + 1 < n; ++k) {
    d[k] = (f[k + 1] - f[k - 1]) / (2.0 * dx);
  }
  return d;
}

void check_function(const SeparableFunction& f) {
  const auto n = static_cast<std::size_t>(f.grid.n_points());
  if (f.terms.empty()) {
    throw PreconditionError("separable function has no terms");
  }
  for (const auto& t : f.terms) {
    if (t.g.size() != n || t.h.size() != n) {
      throw PreconditionError("separable term size does not match the grid");
    }
  }
}

// Applies one single-particle operator to the relevant factor of one term.
SeparableFunction::Term apply_term(const OperatorTerm& op,
                                   const SeparableFunction::Term& t,
                                   const Grid1D& grid, const Units& units) {
  SeparableFunction::Term out = t;
  std::vector<Complex>& target = (op.particle == 1) ? out.g : out.h;
  switch (op.kind) {
    case OperatorKind::Position: {
      for (int k = 0; k < grid.n_points(); ++k) {
        target[static_cast<std::size_t>(k)] *= grid.point(k);
      }
      break;
    }
    case OperatorKind::Momentum:
    case OperatorKind::MomentumConjugate: {
      const double sign = (op.kind == OperatorKind::Momentum) ? -1.0 : 1.0;
      const Complex factor = Complex(0.0, sign * units.hbar);
      std::vector<Complex> d = derivative(target, grid.dx());
      for (std::size_t k = 0; k < d.size(); ++k) target[k] = factor * d[k];
      break;
    }
    case OperatorKind::Energy:
    case OperatorKind::EnergyConjugate:
      throw PreconditionError(
          "energy operators act on the time dependence and have no grid "
          "representation; use plane-wave eigenvalue arithmetic instead");
  }
  if (op.coefficient != Complex(1.0, 0.0)) {
    for (auto& v : target) v *= op.coefficient;
  }
  return out;
}

}  // namespace

SeparableFunction apply_operator(const OperatorExpr& op,
                                 const SeparableFunction& f,
                                 const Units& units) {
  validate(units);
  check_function(f);
  if (op.empty()) throw PreconditionError("empty operator expression");
  SeparableFunction out{f.grid, {}};
  out.terms.reserve(op.size() * f.terms.size());
  for (const auto& term_op : op) {
    if (term_op.particle != 1 && term_op.particle != 2) {
      throw PreconditionError("operator term must act on particle 1 or 2");
    }
    for (const auto& t : f.terms) {
      out.terms.push_back(apply_term(term_op, t, f.grid, units));
    }
  }
  return out;
}

namespace {

// <u, v> = trapezoid(conj(u) * v) on the function's grid.
Complex inner(const std::vector<Complex>& u, const std::vector<Complex>& v,
              const Grid1D& grid) {
  Complex acc = 0.5 * (std::conj(u.front()) * v.front() +
                       std::conj(u.back()) * v.back());
  for (std::size_t k = 1; k + 1 < u.size(); ++k) {
    acc += std::conj(u[k]) * v[k];
  }
  return acc * grid.dx();
}

// ||f||^2 = sum_{r,s} <g_r, g_s> <h_r, h_s>: Gram matrices over the factors,
// never the n x n tensor product.
double norm_squared(const SeparableFunction& f) {
  const std::size_t m = f.terms.size();
  double total = 0.0;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t s = 0; s < m; ++s) {
      const Complex gg = inner(f.terms[r].g, f.terms[s].g, f.grid);
      const Complex hh = inner(f.terms[r].h, f.terms[s].h, f.grid);
      total += (gg * hh).real();
    }
  }
  return total;
}

}  // namespace

double l2_norm(const SeparableFunction& f) {
  check_function(f);
  // Roundoff can push a tiny positive norm below zero; clamp before sqrt.
  return std::sqrt(std::max(0.0, norm_squared(f)));
}

double commutator_residual(const OperatorExpr& A, const OperatorExpr& B,
                           const std::vector<SeparableFunction>& test_functions,
                           const Units& units) {
  if (test_functions.empty()) {
    throw PreconditionError("commutator_residual: no test functions");
  }
  double worst = 0.0;
  for (const auto& f : test_functions) {
    const double denom = l2_norm(f);
    if (!(denom > 0.0)) {
      throw PreconditionError("commutator_residual: test function has zero norm");
    }
    SeparableFunction ab = apply_operator(A, apply_operator(B, f, units), units);
    SeparableFunction ba = apply_operator(B, apply_operator(A, f, units), units);
    // (AB - BA) f: concatenate the two term lists with the BA part negated
    // (negating one factor of a product term negates the term).
    for (auto& t : ba.terms) {
      for (auto& v : t.g) v = -v;
      ab.terms.push_back(std::move(t));
    }
    worst = std::max(worst, l2_norm(ab) / denom);
  }
  return worst;
}

EPRPair build_epr_pair(double p1, PairRelation relation, const Units& units) {
  validate(units);
  if (!std::isfinite(p1)) {
    throw PreconditionError("build_epr_pair: p1 must be finite");
  }
  if (p1 == 0.0 && relation == PairRelation::OppositeMomentaFixedSeparation) {
    throw PreconditionError(
        "build_epr_pair: degenerate pair: the fixed-separation relation needs "
        "p1 != 0");
  }
  const double E1 = free_energy(p1, units);

  EPRPair pair;
  pair.relation = relation;
  pair.wave1 = PlaneWave{Complex(1.0, 0.0), Complex(p1, 0.0), E1,
                         ParticleKind::Particle};
  // The antiparticle partner: its label values are the negatives of its
  // observed ones, so choosing the observed momentum fixes both readings.
  const double observed_p2 =
      (relation == PairRelation::OppositeMomentaFixedSeparation) ? p1 : -p1;
  pair.wave2 = PlaneWave{Complex(1.0, 0.0), Complex(observed_p2, 0.0), E1,
                         ParticleKind::Antiparticle};
  return pair;
}

ObservedValues apply_conjugate_operators(const PlaneWave& wave,
                                         const Units& units) {
  validate(units);
  if (wave.kind != ParticleKind::Antiparticle) {
    throw PreconditionError(
        "apply_conjugate_operators: conjugate operators read out antiparticle "
        "modes; use the standard operators for a particle");
  }
  // The mode is exp[i(label_p x - label_E t)/hbar]. d/dx brings down
  // i label_p / hbar, so p_c = +i hbar d/dx has eigenvalue -label_p; d/dt
  // brings down -i label_E / hbar, so E_c = -i hbar d/dt has eigenvalue
  // -label_E. For an antiparticle the labels are the negated observed values,
  // so both conjugate operators return the observed (positive) readings.
  // Pure eigenvalue arithmetic on the exponent; no grid is involved.
  const double p_label = wave.label_momentum().real();
  const double e_label = wave.label_energy();
  return ObservedValues{-p_label, -e_label};
}

PlaneWave spacetime_inversion(const PlaneWave& wave) {
  PlaneWave out = wave;
  // Evaluating the phase at (-x, -t) is the same as flipping both label
  // signs, i.e. flipping the particle/antiparticle reading while keeping the
  // observed momentum and energy (and the amplitude) unchanged.
  out.kind = (wave.kind == ParticleKind::Particle) ? ParticleKind::Antiparticle
                                                   : ParticleKind::Particle;
  return out;
}

FVField spacetime_inversion(const FVField& field) {
  const auto n = static_cast<std::size_t>(field.grid.n_points());
  if (field.phi.size() != n || field.chi.size() != n) {
    throw PreconditionError("spacetime_inversion: field sizes do not match grid");
  }
  if (!field.grid.symmetric_about_origin()) {
    throw PreconditionError(
        "spacetime_inversion: grid must be symmetric about x = 0 so x -> -x "
        "is an exact index reversal");
  }
  FVField out{field.grid, {}, {}};
  out.phi.resize(n);
  out.chi.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.phi[k] = field.chi[n - 1 - k];
    out.chi[k] = field.phi[n - 1 - k];
  }
  return out;
}

}  // namespace kgfv
