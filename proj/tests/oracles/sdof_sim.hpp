#pragma once

#include <cmath>
#include <random>

namespace oracle {

// Euler-Maruyama simulation of a unit-mass oscillator
//   z'' + 2 zeta omega0 z' + omega0^2 z = w(t)
// driven by white noise with E[w(t) w(t + tau)] = intensity * delta(tau).
// Returns the empirical rate of strict upcrossings of `level` per unit time
// after discarding the transient.
inline double simulated_upcrossing_rate(double omega0, double zeta,
                                        double intensity, double level,
                                        double duration, double dt,
                                        double transient,
                                        unsigned long long seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double force_sd = std::sqrt(intensity / dt);
  double z = 0.0;
  double v = 0.0;
  long long crossings = 0;
  const long long steps = static_cast<long long>(duration / dt);
  for (long long k = 0; k < steps; ++k) {
    const double t = k * dt;
    const double accel =
        -2.0 * zeta * omega0 * v - omega0 * omega0 * z + force_sd * gauss(gen);
    const double z_next = z + v * dt;
    const double v_next = v + accel * dt;
    if (t >= transient && z < level && z_next >= level) ++crossings;
    z = z_next;
    v = v_next;
  }
  return static_cast<double>(crossings) / (duration - transient);
}

}  // namespace oracle
