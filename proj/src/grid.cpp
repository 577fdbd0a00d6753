#include "kgfv/grid.hpp"

#include <cmath>

#include "kgfv/errors.hpp"

namespace kgfv {

Grid1D::Grid1D(double x_min, double x_max, int n_points)
    : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (!std::isfinite(x_min) || !std::isfinite(x_max) || !(x_min < x_max)) {
    throw PreconditionError("grid requires finite x_min < x_max");
  }
  if (n_points < 2) {
    throw PreconditionError("grid requires at least 2 points");
  }
  dx_ = (x_max - x_min) / (n_points - 1);
}

std::vector<double> Grid1D::points() const {
  std::vector<double> xs(static_cast<std::size_t>(n_points_));
  for (int k = 0; k < n_points_; ++k) xs[static_cast<std::size_t>(k)] = point(k);
  return xs;
}

int Grid1D::nearest_index(double x) const {
  const double u = (x - x_min_) / dx_;
  const long k = std::lround(u);
  if (k < 0) return 0;
  if (k >= n_points_) return n_points_ - 1;
  return static_cast<int>(k);
}

double trapezoid(const std::vector<double>& f, const Grid1D& grid) {
  if (static_cast<int>(f.size()) != grid.n_points()) {
    throw PreconditionError("trapezoid: sample count does not match the grid");
  }
  double acc = 0.5 * (f.front() + f.back());
  for (std::size_t k = 1; k + 1 < f.size(); ++k) acc += f[k];
  return acc * grid.dx();
}

}  // namespace kgfv
