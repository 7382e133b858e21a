#include <cmath>
#include <vector>

#include <doctest.h>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"
#include "dmet/wl.hpp"

using namespace dmet;

namespace {
constexpr double kL = 4.8;     // nm
constexpr double kLphi = 73.6; // nm
}

TEST_CASE("conductance scale sigma0") {
  // Frozen oracle for e^2 / (2 pi^2 hbar).
  CHECK(sigma0_S() == doctest::Approx(1.2331470983372342e-5).epsilon(1e-10));
}

TEST_CASE("characteristic fields from the two lengths") {
  CharacteristicFields f = characteristic_fields(kL, kLphi);
  // Frozen oracles: B_phi = hbar/(4 e L_phi^2), B_L = hbar/(2 e L^2).
  CHECK(f.B_phi_T == doctest::Approx(0.030377368346402160).epsilon(1e-12));
  CHECK(f.B_L_T == doctest::Approx(14.284113649108215).epsilon(1e-12));
  CHECK(f.sigma0_S == doctest::Approx(sigma0_S()).epsilon(1e-15));
  // Exact algebraic relation between the two fields.
  CHECK(f.B_L_T / f.B_phi_T ==
        doctest::Approx(2.0 * kLphi * kLphi / (kL * kL)).epsilon(1e-12));

  CHECK_THROWS_AS(characteristic_fields(0.0, 10.0), DomainError);
  CHECK_THROWS_AS(characteristic_fields(5.0, -1.0), DomainError);
}

TEST_CASE("perpendicular correction vanishes at zero field") {
  CHECK(std::abs(delta_sigma_perpendicular(0.0, kL, kLphi)) <=
        1e-12 * sigma0_S());
}

TEST_CASE("perpendicular correction matches frozen references") {
  // delta_sigma / sigma0 at 0.1, 1 and 9 T for L = 4.8 nm, L_phi = 73.6 nm.
  CHECK(delta_sigma_perpendicular(0.1, kL, kLphi) / sigma0_S() ==
        doctest::Approx(0.23510778892868529).epsilon(1e-10));
  CHECK(delta_sigma_perpendicular(1.0, kL, kLphi) / sigma0_S() ==
        doctest::Approx(1.6729142563369211).epsilon(1e-10));
  CHECK(delta_sigma_perpendicular(9.0, kL, kLphi) / sigma0_S() ==
        doctest::Approx(3.7287643083909524).epsilon(1e-10));
}

TEST_CASE("perpendicular correction saturates at ln(2 Lphi^2 / L^2)") {
  CharacteristicFields f = characteristic_fields(kL, kLphi);
  double sat = std::log(2.0 * kLphi * kLphi / (kL * kL));
  CHECK(sat == doctest::Approx(6.1532053962019159).epsilon(1e-12));
  double high = delta_sigma_perpendicular(1e6 * f.B_L_T, kL, kLphi) / sigma0_S();
  CHECK(high == doctest::Approx(sat).epsilon(1e-3));
}

TEST_CASE("perpendicular correction grows monotonically") {
  double prev = 0.0;
  for (double b = 0.01; b < 30.0; b *= 1.7) {
    double cur = delta_sigma_perpendicular(b, kL, kLphi);
    CHECK(cur > prev);
    prev = cur;
  }
}

TEST_CASE("perpendicular correction is quadratic at low field") {
  // psi(1/2 + 1/x) expansion: delta_sigma ~ B^2, so quartering under B/2.
  double d1 = delta_sigma_perpendicular(2e-4, kL, kLphi);
  double d2 = delta_sigma_perpendicular(1e-4, kL, kLphi);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("perpendicular correction validates its domain") {
  CHECK_THROWS_AS(delta_sigma_perpendicular(-0.1, kL, kLphi), DomainError);
  CHECK_THROWS_AS(delta_sigma_perpendicular(1.0, kLphi, kL), DomainError);
  CHECK_THROWS_AS(delta_sigma_perpendicular(1.0, kL, kL), DomainError);
  CHECK_THROWS_AS(delta_sigma_perpendicular(1.0, 0.0, kLphi), DomainError);
}

TEST_CASE("parallel correction is the log1p form") {
  double gamma = 0.0077482619;
  for (double b : {0.0, 0.3, 1.0, 4.0, 9.0}) {
    CHECK(delta_sigma_parallel(b, gamma) ==
          doctest::Approx(sigma0_S() * std::log1p(gamma * b * b))
              .epsilon(1e-12));
  }
  // gamma = 0: flat response at every field.
  CHECK(delta_sigma_parallel(9.0, 0.0) == 0.0);
  CHECK_THROWS_AS(delta_sigma_parallel(1.0, -1e-3), DomainError);
  CHECK_THROWS_AS(delta_sigma_parallel(-1.0, 1e-3), DomainError);
}

TEST_CASE("tilt mixing reduces exactly to the pure orientations") {
  double gamma = 0.00775;
  for (double p : {0.7, 1.0, 2.0, 3.5}) {
    for (double b : {0.2, 1.0, 7.0}) {
      CHECK(delta_sigma_tilt(b, 90.0, kL, kLphi, gamma, p) ==
            doctest::Approx(delta_sigma_perpendicular(b, kL, kLphi))
                .epsilon(1e-12));
      CHECK(delta_sigma_tilt(b, 0.0, kL, kLphi, gamma, p) ==
            doctest::Approx(delta_sigma_parallel(b, gamma)).epsilon(1e-12));
    }
  }
}

TEST_CASE("tilt mixing follows the p-norm of the two projections") {
  double gamma = 0.00775, b = 3.0, angle = 35.0;
  double rad = angle * pi / 180.0;
  double perp = delta_sigma_perpendicular(b * std::sin(rad), kL, kLphi);
  double par = delta_sigma_parallel(b * std::cos(rad), gamma);
  for (double p : {0.7, 1.0, 2.0, 3.5}) {
    double expect = std::pow(std::pow(perp, p) + std::pow(par, p), 1.0 / p);
    CHECK(delta_sigma_tilt(b, angle, kL, kLphi, gamma, p) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
  // The generalized mean shrinks as p grows.
  CHECK(delta_sigma_tilt(b, angle, kL, kLphi, gamma, 1.0) >
        delta_sigma_tilt(b, angle, kL, kLphi, gamma, 2.0));
  CHECK(delta_sigma_tilt(b, angle, kL, kLphi, gamma, 2.0) >
        delta_sigma_tilt(b, angle, kL, kLphi, gamma, 3.5));

  CHECK_THROWS_AS(delta_sigma_tilt(b, 100.0, kL, kLphi, gamma, 2.0), DomainError);
  CHECK_THROWS_AS(delta_sigma_tilt(b, -5.0, kL, kLphi, gamma, 2.0), DomainError);
  CHECK_THROWS_AS(delta_sigma_tilt(b, 45.0, kL, kLphi, gamma, 0.0), DomainError);
}

TEST_CASE("trace validation catches structural problems") {
  MagnetoTrace t;
  t.orientation = Orientation::perpendicular;
  t.field_T = {0.1, 0.2, 0.5, 1.0, 2.0};
  t.value = {1, 2, 3, 4, 5};
  t.validate();

  MagnetoTrace short_t = t;
  short_t.field_T.resize(4);
  short_t.value.resize(4);
  CHECK_THROWS_AS(short_t.validate(), InsufficientDataError);

  MagnetoTrace ragged = t;
  ragged.value.pop_back();
  CHECK_THROWS_AS(ragged.validate(), ConfigError);

  MagnetoTrace bad_err = t;
  bad_err.error = {1, 1, 1, 1, 0};  // nonpositive error
  CHECK_THROWS_AS(bad_err.validate(), ConfigError);

  MagnetoTrace tilt = t;
  tilt.orientation = Orientation::tilt;
  CHECK_THROWS_AS(tilt.validate(), ConfigError);  // needs per-point angles
  tilt.angle_deg = {0, 20, 40, 60, 90};
  tilt.validate();

  MagnetoTrace nan_t = t;
  nan_t.value[2] = std::nan("");
  CHECK_THROWS_AS(nan_t.validate(), ConfigError);
}
