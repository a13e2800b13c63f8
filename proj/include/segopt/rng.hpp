#pragma once

#include <cstdint>
#include <random>

namespace segopt {

// Seeded pseudo-random stream with cheap derivation of independent child
// streams. Child derivation depends only on the construction seed, never on
// how many variates the parent has produced, so a fixed stream layout gives
// scheduling-independent reproducibility. All floating-point transforms are
// implemented here (instead of std::*_distribution) so that a given seed
// yields the same variates on every standard library.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  // Independent stream keyed by (seed, salt).
  RngStream child(std::uint64_t salt) const;

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64();
  // Unbiased integer in [0, n), n >= 1.
  std::uint64_t next_below(std::uint64_t n);

  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1)
  double uniform(double a, double b);

  double normal();  // standard normal, Box-Muller
  double normal(double mean, double stddev);

  // Gamma(shape, scale), shape > 0; Marsaglia-Tsang squeeze.
  double gamma(double shape, double scale);

 private:
  std::uint64_t seed_;
  std::mt19937_64 gen_;
};

}  // namespace segopt
