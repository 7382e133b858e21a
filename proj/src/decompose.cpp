#include "dmet/decompose.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "dmet/errors.hpp"
#include "dmet/forward.hpp"
#include "dmet/nnls.hpp"

namespace dmet {

Weighting parse_weighting(const std::string& tag) {
  if (tag == "poisson") return Weighting::poisson;
  if (tag == "uniform") return Weighting::uniform;
  throw ConfigError("unknown weighting '" + tag + "' (expected poisson or uniform)");
}

std::string weighting_tag(Weighting weighting) {
  return weighting == Weighting::poisson ? "poisson" : "uniform";
}

const AmplitudeEstimate& DecompositionResult::element(const std::string& symbol) const {
  for (const auto& e : elements)
    if (e.name == symbol) return e;
  throw ConfigError("decomposition has no element '" + symbol + "'");
}

SpectrumFitter::SpectrumFitter(std::vector<ElementTemplate> templates, ScatterModel scatter,
                               int background_order, const DetectorConfig& detector,
                               Weighting weighting)
    : templates_(std::move(templates)),
      scatter_(scatter),
      background_order_(background_order),
      detector_(detector),
      weighting_(weighting) {
  if (templates_.empty()) throw ConfigError("fit: needs at least one template");
  if (background_order_ < -1)
    throw ConfigError("fit: background order must be >= -1 (-1 disables it)");
  detector_.validate();
  if (scatter_.beam_energy_keV <= 0) throw ConfigError("fit: beam energy must be > 0");

  Spectrum grid = Spectrum::zeros(detector_);
  edges_keV_ = grid.bin_edges_keV;
  const int bins = static_cast<int>(grid.size());
  double e_lo = edges_keV_.front(), e_hi = edges_keV_.back();

  // Constrained columns: one per element template, then enabled scatter peaks.
  // Free columns: background polynomial in u = (E - e_lo)/(e_hi - e_lo).
  std::vector<std::vector<double>> cols;
  for (const auto& element : templates_) {
    element.validate();
    Spectrum shape = Spectrum::zeros(detector_);
    int active_lines = 0;
    for (const auto& line : element.lines) {
      if (line.edge_energy_keV > scatter_.beam_energy_keV) continue;
      if (line.energy_keV < e_lo || line.energy_keV > e_hi)
        throw ConfigError("fit: line '" + element.symbol + " " + line.label +
                          "' lies outside the spectrum range");
      add_gaussian(shape, line.energy_keV, detector_.fwhm_keV(line.energy_keV),
                   line.relative_intensity * line.transmission);
      ++active_lines;
    }
    if (active_lines == 0)
      throw ConfigError("fit: template '" + element.symbol +
                        "' has no excitable line below the beam energy");
    cols.push_back(shape.counts);
    names_.push_back(element.symbol);
  }
  if (scatter_.include_elastic) {
    Spectrum shape = Spectrum::zeros(detector_);
    add_gaussian(shape, scatter_.beam_energy_keV,
                 detector_.fwhm_keV(scatter_.beam_energy_keV), 1.0);
    cols.push_back(shape.counts);
    names_.push_back("elastic");
  }
  if (scatter_.include_compton) {
    Spectrum shape = Spectrum::zeros(detector_);
    double ec = compton_energy_keV(scatter_.beam_energy_keV, scatter_.angle_deg);
    add_gaussian(shape, ec, detector_.fwhm_keV(ec), 1.0);
    cols.push_back(shape.counts);
    names_.push_back("compton");
  }
  n_constrained_ = static_cast<int>(cols.size());

  for (int k = 0; k <= background_order_; ++k) {
    std::vector<double> col(bins);
    for (int i = 0; i < bins; ++i) {
      double u = (0.5 * (edges_keV_[i] + edges_keV_[i + 1]) - e_lo) / (e_hi - e_lo);
      col[i] = std::pow(u, k);
    }
    cols.push_back(std::move(col));
    names_.push_back("bg" + std::to_string(k));
  }

  if (bins <= static_cast<int>(cols.size()))
    throw ConfigError("fit: more parameters than spectrum bins");

  // Duplicate templates make the problem singular; report the pair by name.
  for (int i = 0; i < n_constrained_; ++i)
    for (int j = i + 1; j < n_constrained_; ++j) {
      double dot = 0, ni = 0, nj = 0;
      for (int r = 0; r < bins; ++r) {
        dot += cols[i][r] * cols[j][r];
        ni += cols[i][r] * cols[i][r];
        nj += cols[j][r] * cols[j][r];
      }
      if (dot * dot > (1.0 - 1e-10) * ni * nj)
        throw DegeneracyError("templates '" + names_[i] + "' and '" + names_[j] +
                              "' are linearly indistinguishable on this grid");
    }

  design_.resize(static_cast<std::size_t>(bins) * cols.size());
  for (std::size_t c = 0; c < cols.size(); ++c)
    for (int r = 0; r < bins; ++r) design_[c * bins + r] = cols[c][r];
}

int SpectrumFitter::columns() const {
  return static_cast<int>(names_.size());
}

DecompositionResult SpectrumFitter::fit(const Spectrum& spectrum) const {
  spectrum.validate();
  bool same_grid = spectrum.bin_edges_keV.size() == edges_keV_.size();
  for (std::size_t i = 0; same_grid && i < edges_keV_.size(); ++i)
    same_grid = std::abs(spectrum.bin_edges_keV[i] - edges_keV_[i]) < 1e-9;
  if (!same_grid)
    throw ConfigError("fit: spectrum bin grid differs from the fitter's grid");

  const int bins = static_cast<int>(spectrum.size());
  const int n_cols = columns();
  Eigen::Map<const Eigen::MatrixXd> A(design_.data(), bins, n_cols);
  Eigen::Map<const Eigen::VectorXd> y(spectrum.counts.data(), bins);

  // Poisson weights: start from the observed counts, then refine from the
  // fitted model; the refinement removes the low-count bias that data-driven
  // weights produce. Uniform weighting skips both.
  Eigen::VectorXd w(bins);
  if (weighting_ == Weighting::uniform) {
    w.setOnes();
  } else {
    for (int i = 0; i < bins; ++i) w(i) = 1.0 / std::max(spectrum.counts[i], 1.0);
  }

  NnlsResult sol = nnls(A, y, w, n_constrained_);
  if (weighting_ == Weighting::poisson) {
    for (int pass = 0; pass < 2; ++pass) {
      Eigen::VectorXd model = A * sol.x;
      for (int i = 0; i < bins; ++i) w(i) = 1.0 / std::max(model(i), 1.0);
      sol = nnls(A, y, w, n_constrained_);
    }
  }

  // Standard errors from the weighted normal equations over all columns.
  Eigen::MatrixXd G = A.transpose() * (w.asDiagonal() * A).eval();
  Eigen::MatrixXd cov = G.ldlt().solve(Eigen::MatrixXd::Identity(n_cols, n_cols));

  Eigen::VectorXd residual = y - A * sol.x;
  double chi2 = (w.array() * residual.array().square()).sum();

  DecompositionResult out;
  for (int j = 0; j < n_cols; ++j) {
    AmplitudeEstimate est{names_[j], sol.x(j), std::sqrt(std::max(0.0, cov(j, j))),
                          j < n_constrained_ && sol.at_bound[j]};
    if (j < static_cast<int>(templates_.size())) {
      out.elements.push_back(est);
    } else if (j < n_constrained_) {
      out.scatter.push_back(est);
    } else {
      out.background.push_back(est.amplitude);
      out.background_error.push_back(est.std_error);
    }
  }
  out.residual_norm = residual.norm();
  out.reduced_chi2 = chi2 / (bins - n_cols);
  return out;
}

DecompositionResult fit_spectrum(const Spectrum& spectrum,
                                 const std::vector<ElementTemplate>& templates,
                                 const ScatterModel& scatter, int background_order,
                                 const DetectorConfig& detector, Weighting weighting) {
  // Rebuild the detector's binning from the spectrum itself, so file-loaded
  // spectra on any uniform grid fit with the configured response parameters.
  spectrum.validate();
  DetectorConfig det = detector;
  det.energy_bins = static_cast<int>(spectrum.size());
  det.first_edge_keV = spectrum.bin_edges_keV.front();
  det.bin_width_keV = (spectrum.bin_edges_keV.back() - spectrum.bin_edges_keV.front()) /
                      static_cast<double>(spectrum.size());
  // A grid reconstructed from bin centers can put the first edge a few ulp
  // below zero; snap it so the energy-axis validation stays strict.
  if (std::abs(det.first_edge_keV) < 1e-9 * det.bin_width_keV) det.first_edge_keV = 0.0;
  SpectrumFitter fitter(templates, scatter, background_order, det, weighting);
  return fitter.fit(spectrum);  // rejects non-uniform grids via the grid check
}

}  // namespace dmet
