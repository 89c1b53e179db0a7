#pragma once

// Seeded generators shared by the property tests and the acceptance suite.

#include <algorithm>
#include <random>

#include "byzfusion/detection_model.hpp"

namespace byzfusion::testing {

class InputGenerator {
 public:
  explicit InputGenerator(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo = 0.0, double hi = 1.0) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }

  /// 0 < pf < pd < 1 with pd - pf at least `min_gap`.
  SensorOperatingPoint sensor(double min_gap = 1e-3) {
    for (;;) {
      double a = uniform(1e-4, 1.0 - 1e-4);
      double b = uniform(1e-4, 1.0 - 1e-4);
      if (a > b) std::swap(a, b);
      if (b - a >= min_gap) return {b, a};
    }
  }

  AttackStrategy attack() { return {uniform(), uniform()}; }

  /// Ordered interior marginals pi10 < pi11 with a gap of at least `min_gap`.
  FusedMarginals ordered_marginals(double min_gap = 1e-9) {
    for (;;) {
      double a = uniform();
      double b = uniform();
      if (a > b) std::swap(a, b);
      if (a > 0.0 && b < 1.0 && b - a >= min_gap) return {a, b};
    }
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace byzfusion::testing
