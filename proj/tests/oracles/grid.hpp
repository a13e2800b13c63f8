#pragma once

#include <Eigen/Dense>
#include <functional>

namespace oracle {

struct GridResult {
  Eigen::VectorXd argmin;
  double value = 0.0;
};

inline GridResult grid_min_1d(const std::function<double(double)>& f, double lo,
                              double hi, int points) {
  GridResult best;
  best.argmin = Eigen::VectorXd::Constant(1, lo);
  best.value = f(lo);
  for (int i = 1; i < points; ++i) {
    const double d = lo + (hi - lo) * i / (points - 1);
    const double v = f(d);
    if (v < best.value) {
      best.value = v;
      best.argmin[0] = d;
    }
  }
  return best;
}

inline GridResult grid_min_2d(const std::function<double(double, double)>& f,
                              const Eigen::Vector2d& lo, const Eigen::Vector2d& hi,
                              int points_per_axis) {
  GridResult best;
  best.argmin = lo;
  best.value = f(lo[0], lo[1]);
  for (int i = 0; i < points_per_axis; ++i) {
    const double a = lo[0] + (hi[0] - lo[0]) * i / (points_per_axis - 1);
    for (int j = 0; j < points_per_axis; ++j) {
      const double b = lo[1] + (hi[1] - lo[1]) * j / (points_per_axis - 1);
      const double v = f(a, b);
      if (v < best.value) {
        best.value = v;
        best.argmin = Eigen::Vector2d(a, b);
      }
    }
  }
  return best;
}

}  // namespace oracle
