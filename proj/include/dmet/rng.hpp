#pragma once

#include <cstdint>
#include <random>

namespace dmet {

// Deterministic random source. The engine is std::mt19937_64 (bit-exact by
// the language standard) and all distributions are implemented here rather
// than taken from <random>, whose distribution algorithms vary between
// standard libraries. Identical seeds therefore give identical streams on
// every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  // Uniform in [0, 1).
  double uniform();

  // Standard normal (Box-Muller; one spare cached).
  double normal();

  // Poisson sample. Knuth product-of-uniforms below mean 10; exact inversion
  // enumerated outward from the mode above (O(sqrt(mean)) expected cost).
  // mean must be >= 0 and finite.
  std::int64_t poisson(double mean);

  // Decorrelated child seed for a derived stream (splitmix64 over seed+index).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index);

 private:
  std::mt19937_64 eng_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace dmet
