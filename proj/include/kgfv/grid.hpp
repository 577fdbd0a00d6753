#pragma once

#include <vector>

namespace kgfv {

// Uniform 1-D spatial grid with inclusive endpoints:
//   x_k = x_min + k * dx,  k = 0 .. n_points-1,  dx = (x_max-x_min)/(n_points-1).
//
// point() evaluates the affine blend x_min*(1-u) + x_max*u with u = k/(n-1),
// which hits both endpoints exactly in floating point (the naive
// x_min + k*dx form does not).
class Grid1D {
 public:
  // Throws PreconditionError unless x_min < x_max, both finite, n_points >= 2.
  Grid1D(double x_min, double x_max, int n_points);

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int n_points() const { return n_points_; }
  double dx() const { return dx_; }

  double point(int k) const {
    const double u = static_cast<double>(k) / (n_points_ - 1);
    return x_min_ * (1.0 - u) + x_max_ * u;
  }

  std::vector<double> points() const;

  // Index of the grid point nearest to x (clamped to the grid).
  int nearest_index(double x) const;

  // True when the grid is mirror-symmetric about x = 0, i.e. x_min == -x_max
  // exactly; index reversal k -> n-1-k then maps x_k -> -x_k exactly.
  bool symmetric_about_origin() const { return x_min_ == -x_max_; }

  bool operator==(const Grid1D& other) const = default;

 private:
  double x_min_;
  double x_max_;
  int n_points_;
  double dx_;
};

// Trapezoidal integral of samples f_k over the grid. Sizes must match.
double trapezoid(const std::vector<double>& f, const Grid1D& grid);

}  // namespace kgfv
