#pragma once

#include <cstdint>
#include <random>

#include "critlimit/types.hpp"

namespace critlimit {

// Seeded generator with a portable double mapping, so a seed gives the same
// draws on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  Complex unit_complex();

  // Point on the unit circle scaled by a radius in [lo, hi].
  Complex annulus(double lo, double hi) { return unit_complex() * uniform(lo, hi); }

  // Coefficient distribution used for random linear functions.
  Complex coefficient() { return annulus(0.5, 1.5); }

  std::uint64_t next_seed() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace critlimit
