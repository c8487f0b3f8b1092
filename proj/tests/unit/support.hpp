#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "endemic_delay/endemic_delay.hpp"

namespace testing {

// Deterministic generator for the hand-rolled property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  std::size_t count(std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_); }
  double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }

 private:
  std::mt19937_64 rng_;
};

inline bool close(double a, double b, double rel, double abs = 0.0) {
  return std::abs(a - b) <= std::max(abs, rel * std::max(std::abs(a), std::abs(b)));
}

inline edelay::KernelDensity baseline_phi() { return edelay::KernelDensity::shifted_exponential(10.0, 0.1); }
inline edelay::KernelDensity baseline_psi() { return edelay::KernelDensity::shifted_exponential(5.0, 0.2); }

}  // namespace testing
