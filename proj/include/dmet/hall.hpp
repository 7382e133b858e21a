#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dmet/measured.hpp"
#include "dmet/wl.hpp"

namespace dmet {

// Carrier density / mobility / mean free path from a transverse-resistance
// sweep plus the zero-field sheet conductivity.
struct HallResult {
  Measured n_per_cm2;
  Measured mu_cm2_Vs;
  Measured L_nm;
  double sigma_sheet_S = 0.0;      // input echoed
  Measured slope_ohm_per_T;        // fitted dR_xy/dB
  double intercept_ohm = 0.0;
  double reduced_chi2 = 0.0;
};

// Weighted linear regression of R_xy against B:
//   n  = 1 / (slope * e)
//   mu = sigma_sheet / (n * e)
//   L  = hbar * sqrt(2 pi n) * mu / e
// L is propagated through its sigma_sheet / sqrt(n) form, which the two
// expressions above imply. Per-point errors weight the regression when
// present; otherwise weights are uniform and the slope error is scaled from
// the residuals. Requires an r_xy trace with >= 5 points.
// Nonpositive fitted slope -> FitError (carrier-sign or wiring error).
HallResult hall_analysis(const MagnetoTrace& trace, const Measured& sigma_sheet_S);

// Layer thickness from the parallel-field coupling (SI-converted internally):
//   t = (1/4pi)^(1/4) * sqrt( (hbar/(e L_phi))^2 * sqrt(n) * L * gamma )
// gamma = 0 gives t = 0; any other nonpositive input -> DomainError.
// Relative errors combine as rel_Lphi^2 + (rel_n/4)^2 + (rel_L/2)^2
// + (rel_gamma/2)^2.
Measured thickness_nm(const Measured& Lphi_nm, const Measured& L_nm,
                      const Measured& n_per_cm2, const Measured& gamma_per_T2);

// Algebraic inverse of thickness_nm's central value: the gamma that yields
// the given thickness at fixed (L_phi, L, n).
double gamma_for_thickness(double t_nm, double Lphi_nm, double L_nm, double n_per_cm2);

// Everything known about one device state, for before/after comparison.
struct RunSummary {
  std::string label;
  std::optional<Measured> n_per_cm2;
  std::optional<Measured> mu_cm2_Vs;
  std::optional<Measured> L_nm;
  std::optional<Measured> Lphi_nm;
  std::optional<Measured> gamma_per_T2;
  std::optional<Measured> p;
  std::optional<Measured> t_nm;
};

struct ComparisonEntry {
  std::string quantity;
  std::string unit;
  std::optional<Measured> before;
  std::optional<Measured> after;
  // The fields below are meaningful only when both sides are present.
  double difference = 0.0;      // after - before
  double combined_error = 0.0;  // sqrt(err_b^2 + err_a^2)
  double z = 0.0;               // |difference| / combined_error
  bool consistent = false;      // z < k_sigma
  bool missing = false;         // one side absent; gap reported, not compared
};

struct ComparisonReport {
  std::vector<ComparisonEntry> entries;
  double k_sigma = 2.0;
  bool all_consistent = false;  // over the comparable entries
  // |t_after - t_before| in Angstrom when both thicknesses are present.
  std::optional<double> thickness_delta_angstrom;
};

// Per-quantity difference, combined error, z-score and verdict at k_sigma.
// Quantities missing on either side are flagged, not compared.
ComparisonReport compare_runs(const RunSummary& before, const RunSummary& after,
                              double k_sigma = 2.0);

}  // namespace dmet
