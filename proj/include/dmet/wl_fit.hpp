#pragma once

#include <array>
#include <string>

#include "dmet/measured.hpp"
#include "dmet/wl.hpp"

namespace dmet {

struct FitDiagnostics {
  bool converged = false;
  int iterations = 0;
  double chi2 = 0.0;          // weighted sum of squared residuals
  double reduced_chi2 = 0.0;  // chi2 / (points - parameters)
  std::string message;
};

// Tunables for the transport fits: the multi-start grid of the two-parameter
// fit, and the convergence controls shared by all of them.
struct FitOptions {
  double L_start_min_nm = 1.0;
  double L_start_max_nm = 50.0;
  double Lphi_start_min_nm = 10.0;
  double Lphi_start_max_nm = 500.0;
  int starts_per_axis = 5;          // log-spaced points per parameter
  double relative_tolerance = 1e-10;
  int max_iterations = 200;         // per start

  void validate() const;  // positive bounds, min < max, >= 2 starts
};

// Result of the two-parameter perpendicular-field fit.
struct PerpFitResult {
  Measured L_nm;
  Measured Lphi_nm;
  std::array<std::array<double, 2>, 2> covariance{};  // (L, L_phi) order, nm^2
  bool validity_warning = false;  // L_phi <= L at the optimum
  FitDiagnostics diagnostics;
};

// Fit the perpendicular-field model for (L, L_phi) by damped (Levenberg
// style) least squares in log-parameters, multi-started from a log-spaced
// grid L in [1, 50] nm x L_phi in [10, 500] nm. Converges when the relative
// step < 1e-10, capped at 200 iterations per start. Standard errors come from
// the Jacobian at the optimum; with uniform weights they are scaled by the
// residual variance. Requires a perpendicular delta_sigma trace, >= 5 points
// spanning a factor >= 10 in B. Non-convergence -> FitError with diagnostics.
PerpFitResult fit_perp(const MagnetoTrace& trace, const FitOptions& options = {});

// One-parameter fit result.
struct ScalarFitResult {
  Measured value;
  bool infinite_relative_error = false;  // flat response: value 0, no scale
  FitDiagnostics diagnostics;
};

// Fit gamma in the parallel-field model by bracketed scan plus golden-section
// refinement. An identically zero trace returns gamma = 0 flagged with
// infinite relative error. Requires a parallel delta_sigma trace, >= 5 points.
ScalarFitResult fit_parallel(const MagnetoTrace& trace,
                             const FitOptions& options = {});

// Fit the mixing exponent p from a fixed-|B| angle sweep, given the
// perpendicular lengths and gamma. Requires a tilt trace with >= 5 distinct
// angles at one field magnitude; a degenerate sweep -> FitError.
ScalarFitResult fit_tilt(const MagnetoTrace& trace, double L_nm, double Lphi_nm,
                         double gamma_per_T2, const FitOptions& options = {});

}  // namespace dmet
