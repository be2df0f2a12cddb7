#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <random>

#include "gpach/scalars.hpp"

namespace gpach {

// Deterministic seeded source; identical seeds give identical draws on any platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : gen_(seed) {}

  // Independent per-trial stream derived from a master seed.
  static RandomSource trial_stream(std::uint64_t master, std::uint64_t index);

  std::uint64_t next() { return gen_(); }
  std::uint64_t below(std::uint64_t n);  // uniform in [0, n)
  long int_in(long lo, long hi);         // uniform in [lo, hi]

  // num in [-max_num, max_num], den in [1, max_den].
  mpq_class rational(long max_num = 9999, long max_den = 9999);
  mpq_class nonzero_rational(long max_num = 9999, long max_den = 9999);

 private:
  std::mt19937_64 gen_;
};

}  // namespace gpach
