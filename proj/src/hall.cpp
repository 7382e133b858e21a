#include "dmet/hall.hpp"

#include <cmath>
#include <limits>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"

namespace dmet {

HallResult hall_analysis(const MagnetoTrace& trace, const Measured& sigma_sheet_S) {
  trace.validate();
  if (trace.quantity != TraceQuantity::r_xy)
    throw ConfigError("hall_analysis: trace must hold r_xy values");
  if (!(sigma_sheet_S.value > 0))
    throw DomainError("hall_analysis: sheet conductivity must be positive");

  const int n_pts = static_cast<int>(trace.size());
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (int i = 0; i < n_pts; ++i) {
    double w = trace.error.empty() ? 1.0 : 1.0 / (trace.error[i] * trace.error[i]);
    double x = trace.field_T[i], y = trace.value[i];
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
  }
  double det = sw * swxx - swx * swx;
  if (!(det > 0))
    throw FitError("hall_analysis: degenerate field sweep (single field value)");
  double slope = (sw * swxy - swx * swy) / det;
  double intercept = (swxx * swy - swx * swxy) / det;

  double chi2 = 0;
  for (int i = 0; i < n_pts; ++i) {
    double w = trace.error.empty() ? 1.0 : 1.0 / (trace.error[i] * trace.error[i]);
    double r = slope * trace.field_T[i] + intercept - trace.value[i];
    chi2 += w * r * r;
  }
  double slope_var = sw / det;
  if (trace.error.empty()) slope_var *= chi2 / std::max(1, n_pts - 2);
  double slope_err = std::sqrt(slope_var);

  if (!(slope > 0))
    throw FitError(
        "hall_analysis: fitted Hall slope is not positive; check carrier sign "
        "and contact wiring");

  // slope = 1/(n e) with n per m^2.
  double n_m2 = 1.0 / (slope * constants.e);
  Measured slope_m{slope, slope_err};
  double rel_n = slope_m.relative_error();
  double rel_sigma = sigma_sheet_S.relative_error();

  double mu_SI = sigma_sheet_S.value / (n_m2 * constants.e);
  double rel_mu = quadrature(rel_sigma, rel_n);

  // L = hbar sqrt(2 pi n) mu / e reduces to hbar sqrt(2 pi) sigma / (sqrt(n) e^2).
  double L_m = constants.hbar * std::sqrt(2.0 * pi * n_m2) * mu_SI / constants.e;
  double rel_L = quadrature(rel_sigma, 0.5 * rel_n);

  HallResult out;
  out.n_per_cm2 = {n_m2 * 1e-4, n_m2 * 1e-4 * rel_n};
  out.mu_cm2_Vs = {mu_SI * 1e4, mu_SI * 1e4 * rel_mu};
  out.L_nm = {L_m * 1e9, L_m * 1e9 * rel_L};
  out.sigma_sheet_S = sigma_sheet_S.value;
  out.slope_ohm_per_T = slope_m;
  out.intercept_ohm = intercept;
  out.reduced_chi2 = chi2 / std::max(1, n_pts - 2);
  return out;
}

Measured thickness_nm(const Measured& Lphi_nm, const Measured& L_nm,
                      const Measured& n_per_cm2, const Measured& gamma_per_T2) {
  if (gamma_per_T2.value == 0.0) return {0.0, 0.0};
  if (!(Lphi_nm.value > 0) || !(L_nm.value > 0) || !(n_per_cm2.value > 0) ||
      !(gamma_per_T2.value > 0))
    throw DomainError("thickness_nm: inputs must be positive (gamma may be 0)");

  double Lphi_m = Lphi_nm.value * 1e-9;
  double L_m = L_nm.value * 1e-9;
  double n_m2 = n_per_cm2.value * 1e4;
  double pref = std::pow(1.0 / (4.0 * pi), 0.25);
  double ratio = constants.hbar / (constants.e * Lphi_m);
  double t_m =
      pref * std::sqrt(ratio * ratio * std::sqrt(n_m2) * L_m * gamma_per_T2.value);

  double rel = std::sqrt(std::pow(Lphi_nm.relative_error(), 2) +
                         std::pow(n_per_cm2.relative_error() / 4.0, 2) +
                         std::pow(L_nm.relative_error() / 2.0, 2) +
                         std::pow(gamma_per_T2.relative_error() / 2.0, 2));
  return {t_m * 1e9, t_m * 1e9 * rel};
}

double gamma_for_thickness(double t_nm, double Lphi_nm, double L_nm,
                           double n_per_cm2) {
  if (t_nm == 0.0) return 0.0;
  if (!(t_nm > 0) || !(Lphi_nm > 0) || !(L_nm > 0) || !(n_per_cm2 > 0))
    throw DomainError("gamma_for_thickness: inputs must be positive");
  double Lphi_m = Lphi_nm * 1e-9;
  double L_m = L_nm * 1e-9;
  double n_m2 = n_per_cm2 * 1e4;
  double pref = std::pow(1.0 / (4.0 * pi), 0.25);
  double ratio = constants.hbar / (constants.e * Lphi_m);
  double t_m = t_nm * 1e-9;
  return (t_m / pref) * (t_m / pref) / (ratio * ratio * std::sqrt(n_m2) * L_m);
}

namespace {

ComparisonEntry compare_one(const std::string& quantity, const std::string& unit,
                            const std::optional<Measured>& before,
                            const std::optional<Measured>& after, double k_sigma) {
  ComparisonEntry e;
  e.quantity = quantity;
  e.unit = unit;
  e.before = before;
  e.after = after;
  if (!before.has_value() || !after.has_value()) {
    e.missing = true;
    return e;
  }
  e.difference = after->value - before->value;
  e.combined_error = quadrature(before->error, after->error);
  if (e.combined_error > 0) {
    e.z = std::abs(e.difference) / e.combined_error;
  } else {
    e.z = e.difference == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  e.consistent = e.z < k_sigma;
  return e;
}

}  // namespace

ComparisonReport compare_runs(const RunSummary& before, const RunSummary& after,
                              double k_sigma) {
  if (!(k_sigma > 0)) throw ConfigError("compare_runs: k_sigma must be positive");
  ComparisonReport report;
  report.k_sigma = k_sigma;
  report.entries = {
      compare_one("n", "cm^-2", before.n_per_cm2, after.n_per_cm2, k_sigma),
      compare_one("mu", "cm^2/Vs", before.mu_cm2_Vs, after.mu_cm2_Vs, k_sigma),
      compare_one("L", "nm", before.L_nm, after.L_nm, k_sigma),
      compare_one("L_phi", "nm", before.Lphi_nm, after.Lphi_nm, k_sigma),
      compare_one("gamma", "T^-2", before.gamma_per_T2, after.gamma_per_T2, k_sigma),
      compare_one("p", "1", before.p, after.p, k_sigma),
      compare_one("t", "nm", before.t_nm, after.t_nm, k_sigma),
  };
  report.all_consistent = true;
  for (const auto& e : report.entries)
    if (!e.missing && !e.consistent) report.all_consistent = false;
  if (before.t_nm.has_value() && after.t_nm.has_value())
    report.thickness_delta_angstrom =
        std::abs(after.t_nm->value - before.t_nm->value) * 10.0;
  return report;
}

}  // namespace dmet
