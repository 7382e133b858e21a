#include "dmet/special.hpp"

#include <cmath>
#include <string>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"

namespace dmet {

namespace {

void check_pole(double x) {
  if (x <= 0.0 && x == std::floor(x))
    throw DomainError("digamma/trigamma pole at x = " + std::to_string(x));
  if (!std::isfinite(x)) throw DomainError("digamma/trigamma: non-finite argument");
}

// Asymptotic series for x >= 10; the x^-14 Bernoulli term leaves a relative
// error below 1e-15 there.
double digamma_asymptotic(double x) {
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  double series = inv2 * (1.0 / 12.0 +
                  inv2 * (-1.0 / 120.0 +
                  inv2 * (1.0 / 252.0 +
                  inv2 * (-1.0 / 240.0 +
                  inv2 * (1.0 / 132.0 +
                  inv2 * (-691.0 / 32760.0 +
                  inv2 * (1.0 / 12.0)))))));
  return std::log(x) - 0.5 * inv - series;
}

double trigamma_asymptotic(double x) {
  double inv = 1.0 / x;
  double inv2 = inv * inv;
  double series = inv * inv2 * (1.0 / 6.0 +
                  inv2 * (-1.0 / 30.0 +
                  inv2 * (1.0 / 42.0 +
                  inv2 * (-1.0 / 30.0 +
                  inv2 * (5.0 / 66.0 +
                  inv2 * (-691.0 / 2730.0 +
                  inv2 * (7.0 / 6.0)))))));
  return inv + 0.5 * inv2 + series;
}

}  // namespace

double digamma(double x) {
  check_pole(x);
  if (x < 0.5) {
    // Reflection: psi(x) = psi(1 - x) - pi / tan(pi x).
    return digamma(1.0 - x) - pi / std::tan(pi * x);
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  return acc + digamma_asymptotic(x);
}

double trigamma(double x) {
  check_pole(x);
  if (x < 0.5) {
    // Reflection: psi'(x) + psi'(1 - x) = pi^2 / sin^2(pi x).
    double s = std::sin(pi * x);
    return pi * pi / (s * s) - trigamma(1.0 - x);
  }
  double acc = 0.0;
  while (x < 10.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  return acc + trigamma_asymptotic(x);
}

}  // namespace dmet
