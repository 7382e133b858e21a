#include <cmath>
#include <vector>

#include <doctest.h>

#include "dmet/constants.hpp"
#include "dmet/demo.hpp"
#include "dmet/errors.hpp"
#include "dmet/hall.hpp"
#include "dmet/rng.hpp"
#include "dmet/wl.hpp"

using namespace dmet;

namespace {

constexpr double kN = 1.31e14;                      // carriers / cm^2
constexpr double kSlope = 4.7645107438631776;       // ohm / T at kN
constexpr double kMu = 25.418498226619208;          // cm^2 / Vs at L = 4.8 nm
constexpr double kGamma = 0.0077482619044548921;    // 1 / T^2 at t = 0.98 nm

// R_xy sweep for carrier density n with optional Gaussian noise [ohm].
MagnetoTrace rxy_trace(double n_per_cm2, double noise_ohm = 0.0,
                       std::uint64_t seed = 1) {
  MagnetoTrace t;
  t.orientation = Orientation::perpendicular;
  t.quantity = TraceQuantity::r_xy;
  Rng rng(seed);
  double slope = 1.0 / (n_per_cm2 * 1e4 * constants.e);
  for (int i = 0; i < 25; ++i) {
    double b = -9.0 + 0.75 * i;
    t.field_T.push_back(b);
    double v = slope * b;
    if (noise_ohm > 0.0) {
      t.value.push_back(v + noise_ohm * rng.normal());
      t.error.push_back(noise_ohm);
    } else {
      t.value.push_back(v);
    }
  }
  return t;
}

}  // namespace

TEST_CASE("hall analysis recovers density, mobility, and mean free path") {
  double sigma_sheet = kN * 1e4 * constants.e * kMu * 1e-4;  // n e mu in S
  HallResult r = hall_analysis(rxy_trace(kN), {sigma_sheet, 0.0});

  CHECK(r.slope_ohm_per_T.value == doctest::Approx(kSlope).epsilon(1e-10));
  CHECK(r.n_per_cm2.value == doctest::Approx(kN).epsilon(1e-10));
  CHECK(r.mu_cm2_Vs.value == doctest::Approx(kMu).epsilon(1e-9));
  CHECK(r.L_nm.value == doctest::Approx(4.8).epsilon(1e-9));
  CHECK(r.intercept_ohm == doctest::Approx(0.0).scale(kSlope));
  CHECK(r.sigma_sheet_S == doctest::Approx(sigma_sheet));
}

TEST_CASE("hall analysis under noise stays within stated tolerances") {
  double sigma_sheet = kN * 1e4 * constants.e * kMu * 1e-4;
  // 0.5% of the full-scale transverse resistance as per-point noise.
  double noise = 0.005 * kSlope * 9.0;
  HallResult r = hall_analysis(rxy_trace(kN, noise, 7), {sigma_sheet, 0.0});

  CHECK(r.slope_ohm_per_T.value == doctest::Approx(kSlope).epsilon(0.005));
  CHECK(r.n_per_cm2.value == doctest::Approx(kN).epsilon(0.005));
  CHECK(r.mu_cm2_Vs.value == doctest::Approx(kMu).epsilon(0.02));
  CHECK(std::abs(r.slope_ohm_per_T.value - kSlope) <
        5.0 * r.slope_ohm_per_T.error);
  CHECK(r.reduced_chi2 > 0.2);
  CHECK(r.reduced_chi2 < 3.0);
  // Density error follows from the slope error.
  CHECK(r.n_per_cm2.relative_error() ==
        doctest::Approx(r.slope_ohm_per_T.relative_error()).epsilon(1e-9));
}

TEST_CASE("hall analysis rejects bad input") {
  double sigma_sheet = kN * 1e4 * constants.e * kMu * 1e-4;

  // Negative slope: electron-like R_xy flipped.
  MagnetoTrace flipped = rxy_trace(kN);
  for (double& v : flipped.value) v = -v;
  CHECK_THROWS_AS(hall_analysis(flipped, {sigma_sheet, 0.0}), FitError);

  // Flat trace has zero slope.
  MagnetoTrace flat = rxy_trace(kN);
  for (double& v : flat.value) v = 1.0;
  CHECK_THROWS_AS(hall_analysis(flat, {sigma_sheet, 0.0}), FitError);

  // Wrong trace quantity.
  MagnetoTrace ds = rxy_trace(kN);
  ds.quantity = TraceQuantity::delta_sigma;
  CHECK_THROWS_AS(hall_analysis(ds, {sigma_sheet, 0.0}), ConfigError);

  // Too few points.
  MagnetoTrace seq = rxy_trace(kN);
  seq.field_T.resize(4);
  seq.value.resize(4);
  CHECK_THROWS_AS(hall_analysis(seq, {sigma_sheet, 0.0}), InsufficientDataError);

  // Nonpositive sheet conductivity.
  CHECK_THROWS_AS(hall_analysis(rxy_trace(kN), {0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(hall_analysis(rxy_trace(kN), {-1.0, 0.0}), DomainError);
}

TEST_CASE("thickness round-trips through gamma_for_thickness") {
  double g = gamma_for_thickness(0.98, 73.6, 4.8, kN);
  CHECK(g == doctest::Approx(kGamma).epsilon(1e-12));

  Measured t = thickness_nm({73.6, 0.0}, {4.8, 0.0}, {kN, 0.0}, {g, 0.0});
  CHECK(t.value == doctest::Approx(0.98).epsilon(1e-9));
  CHECK(t.error == 0.0);
}

TEST_CASE("thickness scaling exponents") {
  // t ~ Lphi^-1 * n^(1/4) * L^(1/2) * gamma^(1/2): scale one input at a
  // time and compare against the predicted power law.
  double base = thickness_nm({73.6, 0}, {4.8, 0}, {kN, 0}, {kGamma, 0}).value;
  double k = 3.7;
  CHECK(thickness_nm({73.6 * k, 0}, {4.8, 0}, {kN, 0}, {kGamma, 0}).value ==
        doctest::Approx(base / k).epsilon(1e-12));
  CHECK(thickness_nm({73.6, 0}, {4.8 * k, 0}, {kN, 0}, {kGamma, 0}).value ==
        doctest::Approx(base * std::sqrt(k)).epsilon(1e-12));
  CHECK(thickness_nm({73.6, 0}, {4.8, 0}, {kN * k, 0}, {kGamma, 0}).value ==
        doctest::Approx(base * std::pow(k, 0.25)).epsilon(1e-12));
  CHECK(thickness_nm({73.6, 0}, {4.8, 0}, {kN, 0}, {kGamma * k, 0}).value ==
        doctest::Approx(base * std::sqrt(k)).epsilon(1e-12));
}

TEST_CASE("thickness error propagation and domain") {
  // gamma = 0 is the defined decoupled limit.
  Measured zero = thickness_nm({73.6, 0.4}, {4.8, 0.1}, {kN, 3e12}, {0.0, 0.0});
  CHECK(zero.value == 0.0);

  Measured t = thickness_nm({73.6, 0.4}, {4.8, 0.1}, {kN, 3e12}, {kGamma, 0.001});
  double rel_expected = std::sqrt(
      std::pow(0.4 / 73.6, 2) + std::pow(3e12 / kN / 4.0, 2) +
      std::pow(0.1 / 4.8 / 2.0, 2) + std::pow(0.001 / kGamma / 2.0, 2));
  CHECK(t.relative_error() == doctest::Approx(rel_expected).epsilon(1e-9));

  CHECK_THROWS_AS(thickness_nm({-73.6, 0}, {4.8, 0}, {kN, 0}, {kGamma, 0}),
                  DomainError);
  CHECK_THROWS_AS(thickness_nm({73.6, 0}, {0.0, 0}, {kN, 0}, {kGamma, 0}),
                  DomainError);
  CHECK_THROWS_AS(thickness_nm({73.6, 0}, {4.8, 0}, {-kN, 0}, {kGamma, 0}),
                  DomainError);
  CHECK_THROWS_AS(thickness_nm({73.6, 0}, {4.8, 0}, {kN, 0}, {-kGamma, 0}),
                  DomainError);
  CHECK_THROWS_AS(gamma_for_thickness(0.98, 0.0, 4.8, kN), DomainError);
}

TEST_CASE("comparing a run against itself is fully consistent") {
  RunSummary s;
  s.label = "same";
  s.n_per_cm2 = Measured{kN, 3e12};
  s.L_nm = Measured{4.8, 0.1};
  s.Lphi_nm = Measured{73.6, 0.4};
  s.p = Measured{2.0, 0.3};
  s.t_nm = Measured{0.98, 0.02};
  ComparisonReport rep = compare_runs(s, s);
  CHECK(rep.all_consistent);
  CHECK(rep.thickness_delta_angstrom.has_value());
  CHECK(*rep.thickness_delta_angstrom == doctest::Approx(0.0));
  for (const auto& e : rep.entries) {
    if (e.missing) continue;
    CHECK(e.z == doctest::Approx(0.0));
    CHECK(e.consistent);
    CHECK(e.difference == doctest::Approx(0.0));
  }
}

TEST_CASE("before/after exposure comparison stays within two sigma") {
  ComparisonReport rep =
      compare_runs(demo_transport_before(), demo_transport_after());
  CHECK(rep.k_sigma == doctest::Approx(2.0));
  CHECK(rep.all_consistent);
  int compared = 0;
  for (const auto& e : rep.entries) {
    if (e.missing) continue;
    ++compared;
    CHECK(e.z < 2.0);
    CHECK(e.consistent);
  }
  CHECK(compared >= 5);
  REQUIRE(rep.thickness_delta_angstrom.has_value());
  CHECK(*rep.thickness_delta_angstrom == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(*rep.thickness_delta_angstrom < 0.2);
}

TEST_CASE("comparison flags one-sided quantities instead of comparing") {
  RunSummary before = demo_transport_before();  // carries no mu or gamma
  RunSummary after = demo_transport_after();
  after.mu_cm2_Vs = Measured{25.4, 0.5};
  ComparisonReport rep = compare_runs(before, after);
  bool saw_missing = false;
  for (const auto& e : rep.entries) {
    if (e.quantity == "mu") {
      saw_missing = true;
      CHECK(e.missing);
      CHECK_FALSE(e.consistent);
    }
  }
  CHECK(saw_missing);
  // Missing rows do not spoil overall consistency.
  CHECK(rep.all_consistent);
}

TEST_CASE("comparison verdict tracks k_sigma") {
  RunSummary a, b;
  a.label = "a";
  b.label = "b";
  a.n_per_cm2 = Measured{1.00e14, 0.05e14};
  b.n_per_cm2 = Measured{1.15e14, 0.05e14};  // z = 1.5 / sqrt(2) = 2.12
  ComparisonReport strict = compare_runs(a, b, 2.0);
  CHECK_FALSE(strict.all_consistent);
  ComparisonReport loose = compare_runs(a, b, 3.0);
  CHECK(loose.all_consistent);
  CHECK(loose.entries.at(0).z == doctest::Approx(3.0 / std::sqrt(2.0)));
}
