#include "kgfv/fv.hpp"

#include <cmath>

#include "kgfv/errors.hpp"

namespace kgfv {

namespace {

void check_sizes(std::size_t a, std::size_t b, const Grid1D& grid,
                 const char* what) {
  const auto n = static_cast<std::size_t>(grid.n_points());
  if (a != n || b != n) {
    throw PreconditionError(std::string(what) +
                            ": component sizes do not match the grid");
  }
}

}  // namespace

FVField decompose(const KGState& state, const std::vector<double>& potential,
                  const Units& units) {
  validate(units);
  check_sizes(state.psi.size(), state.psi_dot.size(), state.grid, "decompose");
  if (potential.size() != state.psi.size()) {
    throw PreconditionError("decompose: potential samples do not match the grid");
  }
  const double mc2 = units.rest_energy();
  const Complex i_hbar_over_mc2(0.0, units.hbar / mc2);

  FVField out{state.grid, {}, {}};
  const std::size_t n = state.psi.size();
  out.phi.resize(n);
  out.chi.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double v = potential[k] / mc2;
    const Complex w = i_hbar_over_mc2 * state.psi_dot[k];
    out.phi[k] = 0.5 * ((1.0 - v) * state.psi[k] + w);
    out.chi[k] = 0.5 * ((1.0 + v) * state.psi[k] - w);
  }
  return out;
}

KGState recompose(const FVField& field, const std::vector<double>& potential,
                  const Units& units) {
  validate(units);
  check_sizes(field.phi.size(), field.chi.size(), field.grid, "recompose");
  if (potential.size() != field.phi.size()) {
    throw PreconditionError("recompose: potential samples do not match the grid");
  }
  const double mc2 = units.rest_energy();
  // i hbar psi_dot = mc^2 (phi - chi) + V psi  =>  psi_dot = -i [...] / hbar.
  const Complex minus_i_over_hbar(0.0, -1.0 / units.hbar);

  KGState out{field.grid, {}, {}};
  const std::size_t n = field.phi.size();
  out.psi.resize(n);
  out.psi_dot.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex psi = field.phi[k] + field.chi[k];
    out.psi[k] = psi;
    out.psi_dot[k] =
        minus_i_over_hbar * (mc2 * (field.phi[k] - field.chi[k]) +
                             potential[k] * psi);
  }
  return out;
}

std::vector<double> charge_density(const FVField& field) {
  check_sizes(field.phi.size(), field.chi.size(), field.grid, "charge_density");
  std::vector<double> rho(field.phi.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    rho[k] = std::norm(field.phi[k]) - std::norm(field.chi[k]);
  }
  return rho;
}

std::vector<double> charge_density(const KGState& state,
                                   const std::vector<double>& potential,
                                   const Units& units) {
  validate(units);
  check_sizes(state.psi.size(), state.psi_dot.size(), state.grid,
              "charge_density");
  if (potential.size() != state.psi.size()) {
    throw PreconditionError(
        "charge_density: potential samples do not match the grid");
  }
  const double mc2 = units.rest_energy();
  std::vector<double> rho(state.psi.size());
  for (std::size_t k = 0; k < rho.size(); ++k) {
    // (i hbar / 2 mc^2)(psi* psi_dot - psi_dot* psi): the bracket is
    // 2i Im(psi* psi_dot), so the whole term is -(hbar/mc^2) Im(psi* psi_dot).
    const double bilinear =
        -(units.hbar / mc2) * std::imag(std::conj(state.psi[k]) * state.psi_dot[k]);
    rho[k] = bilinear - (potential[k] / mc2) * std::norm(state.psi[k]);
  }
  return rho;
}

std::vector<double> current_density(const KGState& state, const Units& units) {
  validate(units);
  check_sizes(state.psi.size(), state.psi_dot.size(), state.grid,
              "current_density");
  const int n = state.grid.n_points();
  if (n < 3) {
    throw PreconditionError("current_density: needs at least 3 grid points");
  }
  const double dx = state.grid.dx();
  const double scale = units.hbar / units.m;
  const auto& psi = state.psi;

  // j = (hbar/m) Im(psi* dpsi/dx)
  std::vector<double> j(static_cast<std::size_t>(n));
  auto at = [&](int k) { return psi[static_cast<std::size_t>(k)]; };
  {
    // one-sided second-order: f'(x0) = (-3 f0 + 4 f1 - f2) / (2 dx)
    const Complex d0 = (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dx);
    j[0] = scale * std::imag(std::conj(at(0)) * d0);
    const Complex dn =
        (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * dx);
    j[static_cast<std::size_t>(n - 1)] =
        scale * std::imag(std::conj(at(n - 1)) * dn);
  }
  for (int k = 1; k + 1 < n; ++k) {
    const Complex dk = (at(k + 1) - at(k - 1)) / (2.0 * dx);
    j[static_cast<std::size_t>(k)] = scale * std::imag(std::conj(at(k)) * dk);
  }
  return j;
}

double total_charge(const std::vector<double>& rho, const Grid1D& grid) {
  return trapezoid(rho, grid);
}

double total_charge(const FVField& field) {
  return trapezoid(charge_density(field), field.grid);
}

double chi_phi_ratio(const FVField& field) {
  check_sizes(field.phi.size(), field.chi.size(), field.grid, "chi_phi_ratio");
  std::vector<double> sq(field.phi.size());
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::norm(field.phi[k]);
  const double phi2 = trapezoid(sq, field.grid);
  for (std::size_t k = 0; k < sq.size(); ++k) sq[k] = std::norm(field.chi[k]);
  const double chi2 = trapezoid(sq, field.grid);
  if (!(phi2 > 0.0)) {
    throw PreconditionError("chi_phi_ratio: phi component vanishes");
  }
  return chi2 / phi2;
}

}  // namespace kgfv
