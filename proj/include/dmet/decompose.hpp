#pragma once

#include <string>
#include <vector>

#include "dmet/elements.hpp"
#include "dmet/types.hpp"

namespace dmet {

// Scatter peaks included in a spectrum decomposition. Shapes are fixed by the
// beam energy and scattering angle; only amplitudes are fitted.
struct ScatterModel {
  double beam_energy_keV = 11.88;
  double angle_deg = 90.0;
  bool include_elastic = true;
  bool include_compton = true;
};

// Residual weighting for the decomposition.
enum class Weighting { poisson, uniform };

Weighting parse_weighting(const std::string& tag);  // "poisson" | "uniform"
std::string weighting_tag(Weighting weighting);

// One fitted amplitude (integrated counts) with its standard error.
struct AmplitudeEstimate {
  std::string name;
  double amplitude = 0.0;  // >= 0 for element/scatter components
  double std_error = 0.0;
  bool at_bound = false;   // non-negativity bound active
};

struct DecompositionResult {
  std::vector<AmplitudeEstimate> elements;  // one per input template, same order
  std::vector<AmplitudeEstimate> scatter;   // "elastic", "compton" as enabled
  std::vector<double> background;           // polynomial coefficients (see below)
  std::vector<double> background_error;
  double residual_norm = 0.0;  // unweighted ||counts - model||_2
  double reduced_chi2 = 0.0;   // weighted SSR / (bins - parameters)

  const AmplitudeEstimate& element(const std::string& symbol) const;  // ConfigError if absent
};

// Decompose a spectrum into non-negative element and scatter amplitudes plus
// an unconstrained polynomial background of the given order (coefficients in
// counts per bin over the normalized energy u = (E - E_lo)/(E_hi - E_lo)).
//
// Template shapes are fixed: each element contributes its lines (edge below
// the scatter model's beam energy) as unit-area Gaussians with the detector's
// FWHM, weighted by relative intensity and transmission. Under Poisson
// weighting the fit starts from w = 1/max(counts,1) and is refined twice from
// the fitted model (w = 1/max(model,1)); the refinement removes the low-count
// bias of purely data-driven weights. Uniform weighting uses w = 1 with no
// refinement. Standard errors come from the weighted normal equations at the
// final weights.
//
// Throws DegeneracyError (naming both templates) when two templates are
// linearly indistinguishable on this bin grid, ConfigError for empty inputs
// or lines outside the spectrum range.
DecompositionResult fit_spectrum(const Spectrum& spectrum,
                                 const std::vector<ElementTemplate>& templates,
                                 const ScatterModel& scatter,
                                 int background_order,
                                 const DetectorConfig& detector,
                                 Weighting weighting = Weighting::poisson);

// Reusable fitter: builds the design matrix once for a fixed bin grid and
// detector, then fits many spectra (used per-pixel over a scan).
class SpectrumFitter {
 public:
  SpectrumFitter(std::vector<ElementTemplate> templates, ScatterModel scatter,
                 int background_order, const DetectorConfig& detector,
                 Weighting weighting = Weighting::poisson);

  DecompositionResult fit(const Spectrum& spectrum) const;

  const std::vector<ElementTemplate>& templates() const { return templates_; }
  int columns() const;

 private:
  std::vector<ElementTemplate> templates_;
  ScatterModel scatter_;
  int background_order_;
  DetectorConfig detector_;
  Weighting weighting_;
  std::vector<double> edges_keV_;
  std::vector<double> design_;  // column-major bins x columns
  int n_constrained_ = 0;
  std::vector<std::string> names_;

  friend DecompositionResult fit_spectrum(const Spectrum&, const std::vector<ElementTemplate>&,
                                          const ScatterModel&, int, const DetectorConfig&,
                                          Weighting);
};

}  // namespace dmet
