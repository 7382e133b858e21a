#include "dmet/rng.hpp"

#include <cmath>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"

namespace dmet {

double Rng::uniform() {
  // 53-bit mantissa from the top bits of one engine draw.
  return (eng_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller on (0,1] uniforms; u > 0 guaranteed by the +1 offset scale.
  double u = ((eng_() >> 11) + 1) * 0x1.0p-53;
  double v = uniform();
  double r = std::sqrt(-2.0 * std::log(u));
  spare_ = r * std::sin(2.0 * pi * v);
  have_spare_ = true;
  return r * std::cos(2.0 * pi * v);
}

std::int64_t Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw DomainError("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  if (mean < 10.0) {
    // Knuth inversion by product of uniforms.
    double limit = std::exp(-mean);
    double prod = uniform();
    std::int64_t k = 0;
    while (prod > limit) {
      prod *= uniform();
      ++k;
    }
    return k;
  }
  // Exact inversion enumerated outward from the mode: walk the probability
  // atoms k0, k0+1, k0-1, k0+2, ... (a fixed ordering of the support) and
  // return the first k whose cumulative mass covers the uniform draw. The
  // mass concentrates within a few sqrt(mean) of the mode, so the expected
  // cost is O(sqrt(mean)); one uniform per sample.
  double u = uniform();
  std::int64_t k0 = static_cast<std::int64_t>(std::floor(mean));
  double p0 = std::exp(static_cast<double>(k0) * std::log(mean) - mean -
                       std::lgamma(static_cast<double>(k0) + 1.0));
  double cum = p0;
  if (u <= cum) return k0;
  double up = p0, dn = p0;
  for (std::int64_t i = 1;; ++i) {
    up *= mean / static_cast<double>(k0 + i);
    cum += up;
    if (u <= cum) return k0 + i;
    if (k0 - i >= 0) {
      dn *= static_cast<double>(k0 - i + 1) / mean;
      cum += dn;
      if (u <= cum) return k0 - i;
    }
    // Both tails underflowed: the remaining mass is below representable
    // precision, so the draw cannot resolve further (p ~ 1e-16 event).
    if (up == 0.0 && dn == 0.0) return k0;
  }
}

std::uint64_t Rng::derive(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over the combined value; decorrelates child streams.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

}  // namespace dmet
