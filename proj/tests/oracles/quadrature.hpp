#pragma once

#include <algorithm>
#include <cmath>

namespace oracle {

// E[max(0, y_star - Y)] for Y ~ N(y_hat, s^2), by composite Simpson
// quadrature on the standardized variable. Degenerate s reduces to the
// deterministic improvement.
inline double ei_quadrature(double y_hat, double s, double y_star,
                            int panels = 20000) {
  if (s <= 0.0) return std::max(0.0, y_star - y_hat);
  const double u = (y_star - y_hat) / s;
  const double hi = u;
  const double lo = std::min(-12.0, u - 1.0);
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  const double inv_sqrt_2pi = 0.3989422804014327;
  auto f = [&](double t) { return (u - t) * inv_sqrt_2pi * std::exp(-0.5 * t * t); };
  double acc = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) acc += f(lo + k * h) * ((k % 2 != 0) ? 4.0 : 2.0);
  return s * acc * h / 3.0;
}

// Composite Simpson integral of an arbitrary scalar function, used for
// density-normalization checks.
template <typename F>
double simpson(F f, double lo, double hi, int panels = 20000) {
  if (panels % 2 != 0) ++panels;
  const double h = (hi - lo) / panels;
  double acc = f(lo) + f(hi);
  for (int k = 1; k < panels; ++k) acc += f(lo + k * h) * ((k % 2 != 0) ? 4.0 : 2.0);
  return acc * h / 3.0;
}

}  // namespace oracle
