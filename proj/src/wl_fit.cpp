#include "dmet/wl_fit.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

#include <Eigen/Dense>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"
#include "dmet/special.hpp"
#include "dmet/wl.hpp"

namespace dmet {

namespace {

// Raw perpendicular-field model in SI lengths, without the L_phi > L validity
// guard: the minimizer must be free to cross it and report a warning instead.
double perp_model(double B_T, double L_m, double Lphi_m) {
  if (B_T == 0.0) return 0.0;
  double B_phi = constants.hbar / (4.0 * constants.e * Lphi_m * Lphi_m);
  double B_L = constants.hbar / (2.0 * constants.e * L_m * L_m);
  double x_phi = 0.5 + B_phi / B_T;
  double x_L = 0.5 + B_L / B_T;
  double sat = std::log(2.0 * (Lphi_m / L_m) * (Lphi_m / L_m));
  // Extreme trial lengths overflow the field scales; report an infinite
  // residual so the damped minimizer rejects the step instead of aborting.
  if (!std::isfinite(x_phi) || !std::isfinite(x_L) || !std::isfinite(sat))
    return std::numeric_limits<double>::infinity();
  return sigma0_S() * (digamma(x_phi) - digamma(x_L) + sat);
}

// Partials with respect to q = (ln L, ln L_phi).
void perp_jacobian(double B_T, double L_m, double Lphi_m, double& d_lnL,
                   double& d_lnLphi) {
  if (B_T == 0.0) {
    d_lnL = d_lnLphi = 0.0;
    return;
  }
  double B_phi = constants.hbar / (4.0 * constants.e * Lphi_m * Lphi_m);
  double B_L = constants.hbar / (2.0 * constants.e * L_m * L_m);
  if (!std::isfinite(B_phi / B_T) || !std::isfinite(B_L / B_T)) {
    d_lnL = d_lnLphi = 0.0;
    return;
  }
  double s0 = sigma0_S();
  // d B_L / d lnL = -2 B_L, d B_phi / d lnL_phi = -2 B_phi.
  d_lnL = s0 * (trigamma(0.5 + B_L / B_T) * 2.0 * B_L / B_T - 2.0);
  d_lnLphi = s0 * (2.0 - trigamma(0.5 + B_phi / B_T) * 2.0 * B_phi / B_T);
}

struct LmOutcome {
  Eigen::Vector2d q;  // (ln L, ln L_phi), lengths in meters
  double chi2 = std::numeric_limits<double>::infinity();
  int iterations = 0;
  bool converged = false;
};

// Damped least squares from one starting point.
LmOutcome lm_from_start(const MagnetoTrace& trace, const Eigen::VectorXd& weight,
                        Eigen::Vector2d q0, const FitOptions& options) {
  const int n = static_cast<int>(trace.size());
  auto chi2_at = [&](const Eigen::Vector2d& q) {
    double L = std::exp(q(0)), Lphi = std::exp(q(1));
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      double r = perp_model(trace.field_T[i], L, Lphi) - trace.value[i];
      acc += weight(i) * r * r;
    }
    return acc;
  };

  LmOutcome out;
  out.q = q0;
  out.chi2 = chi2_at(q0);
  double lambda = 1e-3;
  for (; out.iterations < options.max_iterations; ++out.iterations) {
    double L = std::exp(out.q(0)), Lphi = std::exp(out.q(1));
    Eigen::Matrix2d JtWJ = Eigen::Matrix2d::Zero();
    Eigen::Vector2d JtWr = Eigen::Vector2d::Zero();
    for (int i = 0; i < n; ++i) {
      double j0, j1;
      perp_jacobian(trace.field_T[i], L, Lphi, j0, j1);
      double r = perp_model(trace.field_T[i], L, Lphi) - trace.value[i];
      double w = weight(i);
      JtWJ(0, 0) += w * j0 * j0;
      JtWJ(0, 1) += w * j0 * j1;
      JtWJ(1, 1) += w * j1 * j1;
      JtWr(0) += w * j0 * r;
      JtWr(1) += w * j1 * r;
    }
    JtWJ(1, 0) = JtWJ(0, 1);

    bool stepped = false;
    for (int tries = 0; tries < 25; ++tries) {
      Eigen::Matrix2d damped = JtWJ;
      damped(0, 0) *= 1.0 + lambda;
      damped(1, 1) *= 1.0 + lambda;
      double det = damped(0, 0) * damped(1, 1) - damped(0, 1) * damped(1, 0);
      if (det <= 0 || !std::isfinite(det)) {
        lambda *= 9.0;
        continue;
      }
      Eigen::Vector2d step;
      step(0) = (-JtWr(0) * damped(1, 1) + JtWr(1) * damped(0, 1)) / det;
      step(1) = (-JtWr(1) * damped(0, 0) + JtWr(0) * damped(1, 0)) / det;
      Eigen::Vector2d trial = out.q + step;
      double trial_chi2 = chi2_at(trial);
      if (trial_chi2 <= out.chi2) {
        double rel_step = step.norm() / std::max(1.0, out.q.norm());
        out.q = trial;
        out.chi2 = trial_chi2;
        lambda = std::max(1e-12, lambda / 3.0);
        stepped = true;
        if (rel_step < options.relative_tolerance) {
          out.converged = true;
          return out;
        }
        break;
      }
      lambda *= 9.0;
    }
    if (!stepped) {
      // Damping exhausted: the current point is a (numerical) minimum.
      out.converged = true;
      return out;
    }
  }
  return out;
}

double golden_minimize(const std::function<double(double)>& f, double a, double b,
                       double tol_rel) {
  const double phi = 0.61803398874989485;
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while ((b - a) > tol_rel * (std::abs(a) + std::abs(b)) * 0.5) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = f(x2);
    }
    if (b - a <= 0) break;
  }
  return 0.5 * (a + b);
}

Eigen::VectorXd trace_weights(const MagnetoTrace& trace) {
  const int n = static_cast<int>(trace.size());
  Eigen::VectorXd w(n);
  if (trace.error.empty()) {
    w.setOnes();
  } else {
    for (int i = 0; i < n; ++i) w(i) = 1.0 / (trace.error[i] * trace.error[i]);
  }
  return w;
}

}  // namespace

void FitOptions::validate() const {
  if (!(L_start_min_nm > 0) || !(Lphi_start_min_nm > 0))
    throw ConfigError("fit options: start bounds must be positive");
  if (!(L_start_max_nm > L_start_min_nm) || !(Lphi_start_max_nm > Lphi_start_min_nm))
    throw ConfigError("fit options: start grid bounds must be increasing");
  if (starts_per_axis < 2) throw ConfigError("fit options: needs >= 2 starts per axis");
  if (!(relative_tolerance > 0) || max_iterations < 1)
    throw ConfigError("fit options: tolerance and iteration cap must be positive");
}

PerpFitResult fit_perp(const MagnetoTrace& trace, const FitOptions& options) {
  options.validate();
  trace.validate();
  if (trace.orientation != Orientation::perpendicular)
    throw ConfigError("fit_perp: trace orientation must be perpendicular");
  if (trace.quantity != TraceQuantity::delta_sigma)
    throw ConfigError("fit_perp: trace must hold delta_sigma values");
  double b_min = std::numeric_limits<double>::infinity(), b_max = 0;
  for (double b : trace.field_T) {
    double ab = std::abs(b);
    if (ab > 0) b_min = std::min(b_min, ab);
    b_max = std::max(b_max, ab);
  }
  if (!(b_max / b_min >= 10.0 - 1e-9))
    throw InsufficientDataError("fit_perp: field range must span a factor >= 10");

  Eigen::VectorXd w = trace_weights(trace);

  // Multi-start over a log-spaced (L, L_phi) grid; keep the best optimum.
  LmOutcome best;
  int total_iterations = 0;
  const int starts = options.starts_per_axis;
  for (int i = 0; i < starts; ++i) {
    double L_nm = options.L_start_min_nm *
                  std::pow(options.L_start_max_nm / options.L_start_min_nm,
                           static_cast<double>(i) / (starts - 1));
    for (int j = 0; j < starts; ++j) {
      double Lphi_nm = options.Lphi_start_min_nm *
                       std::pow(options.Lphi_start_max_nm / options.Lphi_start_min_nm,
                                static_cast<double>(j) / (starts - 1));
      if (Lphi_nm <= L_nm) continue;
      Eigen::Vector2d q0(std::log(L_nm * 1e-9), std::log(Lphi_nm * 1e-9));
      LmOutcome candidate = lm_from_start(trace, w, q0, options);
      total_iterations += candidate.iterations;
      if (candidate.converged && candidate.chi2 < best.chi2) best = candidate;
    }
  }
  if (!std::isfinite(best.chi2))
    throw FitError("fit_perp: no start converged (iterations: " +
                   std::to_string(total_iterations) + ")");

  const int n = static_cast<int>(trace.size());
  double L_m = std::exp(best.q(0)), Lphi_m = std::exp(best.q(1));

  // Covariance of (ln L, ln L_phi) from the Jacobian at the optimum; with
  // uniform weights the residual variance s^2 = chi2/(n-2) sets the scale.
  Eigen::Matrix2d JtWJ = Eigen::Matrix2d::Zero();
  for (int i = 0; i < n; ++i) {
    double j0, j1;
    perp_jacobian(trace.field_T[i], L_m, Lphi_m, j0, j1);
    JtWJ(0, 0) += w(i) * j0 * j0;
    JtWJ(0, 1) += w(i) * j0 * j1;
    JtWJ(1, 1) += w(i) * j1 * j1;
  }
  JtWJ(1, 0) = JtWJ(0, 1);
  double scale = trace.error.empty() ? best.chi2 / std::max(1, n - 2) : 1.0;
  Eigen::Matrix2d cov_q = scale * JtWJ.inverse();

  PerpFitResult out;
  out.L_nm = {L_m * 1e9, L_m * 1e9 * std::sqrt(std::max(0.0, cov_q(0, 0)))};
  out.Lphi_nm = {Lphi_m * 1e9, Lphi_m * 1e9 * std::sqrt(std::max(0.0, cov_q(1, 1)))};
  // Covariance in nm^2 via the same log -> linear scaling.
  double sL = L_m * 1e9, sP = Lphi_m * 1e9;
  out.covariance[0][0] = cov_q(0, 0) * sL * sL;
  out.covariance[0][1] = out.covariance[1][0] = cov_q(0, 1) * sL * sP;
  out.covariance[1][1] = cov_q(1, 1) * sP * sP;
  out.validity_warning = !(Lphi_m > L_m);
  out.diagnostics.converged = true;
  out.diagnostics.iterations = total_iterations;
  out.diagnostics.chi2 = best.chi2;
  out.diagnostics.reduced_chi2 = best.chi2 / std::max(1, n - 2);
  out.diagnostics.message = "ok";
  return out;
}

ScalarFitResult fit_parallel(const MagnetoTrace& trace, const FitOptions& options) {
  options.validate();
  trace.validate();
  if (trace.orientation != Orientation::parallel)
    throw ConfigError("fit_parallel: trace orientation must be parallel");
  if (trace.quantity != TraceQuantity::delta_sigma)
    throw ConfigError("fit_parallel: trace must hold delta_sigma values");

  const int n = static_cast<int>(trace.size());
  Eigen::VectorXd w = trace_weights(trace);
  double s0 = sigma0_S();

  double y_max = 0, b_max = 0;
  for (int i = 0; i < n; ++i) {
    y_max = std::max(y_max, std::abs(trace.value[i]));
    b_max = std::max(b_max, std::abs(trace.field_T[i]));
  }
  ScalarFitResult out;
  if (y_max == 0.0) {
    // Identically flat response carries no scale for gamma.
    out.value = {0.0, 0.0};
    out.infinite_relative_error = true;
    out.diagnostics.converged = true;
    out.diagnostics.message = "flat trace: gamma indeterminate, set to 0";
    return out;
  }
  if (b_max == 0.0) throw FitError("fit_parallel: all fields are zero");

  auto sse = [&](double log_gamma) {
    double g = std::exp(log_gamma);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      double r = s0 * std::log1p(g * trace.field_T[i] * trace.field_T[i]) - trace.value[i];
      acc += w(i) * r * r;
    }
    return acc;
  };

  // Bracket in log space around the scale suggested by the largest response,
  // then refine by golden section.
  double g_scale = std::expm1(y_max / s0) / (b_max * b_max);
  double lo = std::log(g_scale) - 12.0, hi = std::log(g_scale) + 6.0;
  int grid = 120;
  double best_lg = lo, best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    double lg = lo + (hi - lo) * i / grid;
    double v = sse(lg);
    if (v < best_sse) {
      best_sse = v;
      best_lg = lg;
    }
  }
  double span = (hi - lo) / grid;
  double lg_opt = golden_minimize(sse, best_lg - span, best_lg + span,
                                  options.relative_tolerance * 1e-3);
  double gamma = std::exp(lg_opt);

  // Gauss-Newton curvature at the optimum gives the standard error.
  double jtj = 0, chi2 = sse(lg_opt);
  for (int i = 0; i < n; ++i) {
    double B2 = trace.field_T[i] * trace.field_T[i];
    double dgdgamma = s0 * B2 / (1.0 + gamma * B2);
    jtj += w(i) * dgdgamma * dgdgamma;
  }
  double scale = trace.error.empty() ? chi2 / std::max(1, n - 1) : 1.0;
  out.value = {gamma, jtj > 0 ? std::sqrt(scale / jtj) : 0.0};
  out.diagnostics.converged = true;
  out.diagnostics.chi2 = chi2;
  out.diagnostics.reduced_chi2 = chi2 / std::max(1, n - 1);
  out.diagnostics.message = "ok";
  return out;
}

ScalarFitResult fit_tilt(const MagnetoTrace& trace, double L_nm, double Lphi_nm,
                         double gamma_per_T2, const FitOptions& options) {
  options.validate();
  trace.validate();
  if (trace.orientation != Orientation::tilt)
    throw ConfigError("fit_tilt: trace orientation must be tilt");
  if (trace.quantity != TraceQuantity::delta_sigma)
    throw ConfigError("fit_tilt: trace must hold delta_sigma values");
  const int n = static_cast<int>(trace.size());

  double b0 = std::abs(trace.field_T[0]);
  for (double b : trace.field_T)
    if (std::abs(std::abs(b) - b0) > 1e-9 * std::max(1.0, b0))
      throw ConfigError("fit_tilt: angle sweep must be at fixed field magnitude");
  double a_min = trace.angle_deg[0], a_max = trace.angle_deg[0];
  for (double a : trace.angle_deg) {
    a_min = std::min(a_min, a);
    a_max = std::max(a_max, a);
  }
  if (a_max - a_min < 1e-9)
    throw FitError("fit_tilt: degenerate sweep (single angle)");

  Eigen::VectorXd w = trace_weights(trace);

  // Orientation components are fixed by (L, L_phi, gamma); only p is fitted.
  std::vector<double> comp_perp(n), comp_par(n);
  for (int i = 0; i < n; ++i) {
    double a = trace.angle_deg[i] * pi / 180.0;
    comp_perp[i] = delta_sigma_perpendicular(std::abs(trace.field_T[i]) * std::sin(a),
                                             L_nm, Lphi_nm);
    comp_par[i] = delta_sigma_parallel(std::abs(trace.field_T[i]) * std::cos(a),
                                       gamma_per_T2);
  }

  auto model = [&](double p, int i) {
    double ap = comp_perp[i] > 0 ? std::pow(comp_perp[i], p) : 0.0;
    double bp = comp_par[i] > 0 ? std::pow(comp_par[i], p) : 0.0;
    if (ap + bp == 0.0) return 0.0;
    return std::pow(ap + bp, 1.0 / p);
  };
  auto sse = [&](double log_p) {
    double p = std::exp(log_p);
    double acc = 0;
    for (int i = 0; i < n; ++i) {
      double r = model(p, i) - trace.value[i];
      acc += w(i) * r * r;
    }
    return acc;
  };

  double lo = std::log(0.2), hi = std::log(10.0);
  int grid = 80;
  double best_lp = lo, best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= grid; ++i) {
    double lp = lo + (hi - lo) * i / grid;
    double v = sse(lp);
    if (v < best_sse) {
      best_sse = v;
      best_lp = lp;
    }
  }
  double span = (hi - lo) / grid;
  double lp_opt = golden_minimize(sse, best_lp - span, best_lp + span,
                                  options.relative_tolerance * 1e-3);
  double p_opt = std::exp(lp_opt);

  // Curvature via the analytic dp-derivative of the p-norm mixture.
  double jtj = 0, chi2 = sse(lp_opt);
  for (int i = 0; i < n; ++i) {
    double ap = comp_perp[i] > 0 ? std::pow(comp_perp[i], p_opt) : 0.0;
    double bp = comp_par[i] > 0 ? std::pow(comp_par[i], p_opt) : 0.0;
    if (ap + bp == 0.0) continue;
    double h = std::pow(ap + bp, 1.0 / p_opt);
    double num = (ap > 0 ? ap * std::log(comp_perp[i]) : 0.0) +
                 (bp > 0 ? bp * std::log(comp_par[i]) : 0.0);
    double dh_dp = h * (num / (p_opt * (ap + bp)) - std::log(ap + bp) / (p_opt * p_opt));
    jtj += w(i) * dh_dp * dh_dp;
  }
  double scale = trace.error.empty() ? chi2 / std::max(1, n - 1) : 1.0;
  ScalarFitResult out;
  out.value = {p_opt, jtj > 0 ? std::sqrt(scale / jtj) : 0.0};
  out.diagnostics.converged = true;
  out.diagnostics.chi2 = chi2;
  out.diagnostics.reduced_chi2 = chi2 / std::max(1, n - 1);
  out.diagnostics.message = "ok";
  return out;
}

}  // namespace dmet
