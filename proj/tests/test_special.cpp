#include <cmath>
#include <limits>

#include <doctest.h>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"
#include "dmet/special.hpp"

using namespace dmet;

namespace {
constexpr double euler_gamma = 0.57721566490153286061;
}

TEST_CASE("digamma at integer arguments equals harmonic sums") {
  // psi(n) = -gamma + sum_{k=1}^{n-1} 1/k, an oracle independent of the
  // recurrence/asymptotic implementation.
  CHECK(digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-13));
  for (int n : {2, 3, 7, 20, 57}) {
    double harmonic = 0.0;
    for (int k = 1; k < n; ++k) harmonic += 1.0 / k;
    CHECK(digamma(n) == doctest::Approx(-euler_gamma + harmonic).epsilon(1e-13));
  }
}

TEST_CASE("digamma at half-integers") {
  // psi(1/2) = -gamma - 2 ln 2.
  CHECK(digamma(0.5) ==
        doctest::Approx(-euler_gamma - 2.0 * std::log(2.0)).epsilon(1e-13));
  // psi(3/2) = psi(1/2) + 2.
  CHECK(digamma(1.5) ==
        doctest::Approx(-euler_gamma - 2.0 * std::log(2.0) + 2.0).epsilon(1e-13));
}

TEST_CASE("digamma frozen reference values") {
  CHECK(digamma(0.7) == doctest::Approx(-1.220023553697935).epsilon(1e-13));
  CHECK(digamma(3.2) == doctest::Approx(0.99883889128659958).epsilon(1e-13));
  CHECK(digamma(10.0) == doctest::Approx(2.2517525890667211).epsilon(1e-13));
}

TEST_CASE("digamma satisfies the recurrence psi(x+1) = psi(x) + 1/x") {
  for (double x : {0.51, 0.9, 1.3, 2.7, 5.5, 9.99, 10.01, 41.7, 123.4}) {
    CHECK(digamma(x + 1.0) ==
          doctest::Approx(digamma(x) + 1.0 / x).epsilon(1e-12));
  }
}

TEST_CASE("digamma satisfies the duplication formula") {
  // psi(2x) = (psi(x) + psi(x + 1/2)) / 2 + ln 2.
  for (double x : {0.6, 1.1, 3.3, 8.8, 25.0}) {
    CHECK(digamma(2.0 * x) ==
          doctest::Approx(0.5 * (digamma(x) + digamma(x + 0.5)) + std::log(2.0))
              .epsilon(1e-12));
  }
}

TEST_CASE("digamma satisfies the reflection formula for negative arguments") {
  // psi(1-x) - psi(x) = pi cot(pi x).
  for (double x : {0.3, 0.25, 0.1}) {
    CHECK(digamma(1.0 - x) - digamma(x) ==
          doctest::Approx(pi / std::tan(pi * x)).epsilon(1e-11));
  }
  // A negative non-integer argument.
  CHECK(digamma(-0.5) ==
        doctest::Approx(2.0 - euler_gamma - 2.0 * std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("digamma and trigamma reject poles and non-finite arguments") {
  CHECK_THROWS_AS(digamma(0.0), DomainError);
  CHECK_THROWS_AS(digamma(-1.0), DomainError);
  CHECK_THROWS_AS(digamma(-13.0), DomainError);
  CHECK_THROWS_AS(trigamma(0.0), DomainError);
  CHECK_THROWS_AS(trigamma(-4.0), DomainError);
  CHECK_THROWS_AS(digamma(std::numeric_limits<double>::quiet_NaN()), DomainError);
  CHECK_THROWS_AS(digamma(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("trigamma at special points equals zeta-function values") {
  // psi'(1) = pi^2/6; psi'(1/2) = pi^2/2; psi'(n) = pi^2/6 - sum 1/k^2.
  CHECK(trigamma(1.0) == doctest::Approx(pi * pi / 6.0).epsilon(1e-13));
  CHECK(trigamma(0.5) == doctest::Approx(pi * pi / 2.0).epsilon(1e-13));
  for (int n : {2, 5, 12, 40}) {
    double partial = 0.0;
    for (int k = 1; k < n; ++k) partial += 1.0 / (static_cast<double>(k) * k);
    CHECK(trigamma(n) == doctest::Approx(pi * pi / 6.0 - partial).epsilon(1e-12));
  }
}

TEST_CASE("trigamma satisfies the recurrence psi'(x+1) = psi'(x) - 1/x^2") {
  for (double x : {0.7, 1.9, 6.2, 9.995, 10.005, 77.7}) {
    CHECK(trigamma(x + 1.0) ==
          doctest::Approx(trigamma(x) - 1.0 / (x * x)).epsilon(1e-12));
  }
}

TEST_CASE("trigamma matches the derivative of digamma") {
  // Five-point central difference; h chosen for ~1e-10 truncation error.
  for (double x : {0.8, 1.7, 4.2, 11.3, 60.0}) {
    double h = 1e-3 * std::max(1.0, x / 10.0);
    double fd = (-digamma(x + 2 * h) + 8 * digamma(x + h) - 8 * digamma(x - h) +
                 digamma(x - 2 * h)) /
                (12 * h);
    CHECK(trigamma(x) == doctest::Approx(fd).epsilon(1e-9));
  }
}
