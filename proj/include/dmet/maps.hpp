#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "dmet/decompose.hpp"
#include "dmet/measured.hpp"
#include "dmet/types.hpp"

namespace dmet {

// Per-pixel fitted amplitude of one element over a scan, in integrated counts
// per pixel dwell. Pixels whose fit failed are flagged with the cause, never
// silently zeroed; the grid stays rectangular.
struct IntensityMap {
  int nx = 0, ny = 0;
  double pitch_x_um = 0.0, pitch_y_um = 0.0;
  double origin_x_um = 0.0, origin_y_um = 0.0;
  std::string element;
  double dwell_s = 0.0;
  std::uint64_t fingerprint = 0;  // acquisition conditions of the source grid
  std::vector<double> amplitude;  // row-major, iy*nx + ix
  std::vector<double> std_error;
  std::vector<std::uint8_t> failed;
  std::map<int, std::string> failure_reason;  // pixel index -> cause

  double at(int ix, int iy) const;  // throws RangeError
  std::size_t index(int ix, int iy) const;
};

// Fit every pixel and return the requested element's amplitude map.
// threads <= 0 means one thread; the result is identical for any thread count.
// Structural errors (degenerate templates, grid/template mismatch) are
// rethrown with the failing pixel attached; per-pixel numerical failures are
// flagged in the map instead.
IntensityMap element_map(const ScanGrid& grid, const std::string& element,
                         const std::vector<ElementTemplate>& templates,
                         const ScatterModel& scatter, int background_order,
                         int threads = 1, Weighting weighting = Weighting::poisson);

// All element maps from a single pass over the pixels (one fit per pixel).
std::map<std::string, IntensityMap> decompose_scan(const ScanGrid& grid,
                                                   const std::vector<ElementTemplate>& templates,
                                                   const ScatterModel& scatter,
                                                   int background_order,
                                                   int threads = 1,
                                                   Weighting weighting = Weighting::poisson);

// Counts-to-density conversion from a reference standard of known density
// measured under the same acquisition conditions.
struct CalibrationFactor {
  std::string element;
  double factor_cm2_per_count = 0.0;
  double relative_error = 0.0;
  std::uint64_t fingerprint = 0;
};

// factor = known_density / ref_amplitude; relative errors in quadrature.
// Nonpositive amplitude or density -> DomainError.
CalibrationFactor calibrate_reference(const Measured& ref_amplitude_counts,
                                      const Measured& known_density_per_cm2,
                                      const std::string& element,
                                      std::uint64_t fingerprint);

// Absolute areal-density map with per-pixel uncertainty.
struct DensityMap {
  int nx = 0, ny = 0;
  double pitch_x_um = 0.0, pitch_y_um = 0.0;
  double origin_x_um = 0.0, origin_y_um = 0.0;
  std::string element;
  std::vector<double> density_per_cm2;      // row-major
  std::vector<double> uncertainty_per_cm2;  // counting and calibration combined
  std::vector<std::uint8_t> failed;

  double at(int ix, int iy) const;
  std::size_t index(int ix, int iy) const;
};

// density = amplitude * factor. The per-pixel uncertainty combines the
// pixel's counting error with the calibration's relative error in quadrature.
// Element or fingerprint mismatch -> CalibrationError.
DensityMap quantify_map(const IntensityMap& map, const CalibrationFactor& calibration);

enum class TraceAxis { x, y };

// Lane through a map: along x at row iy = index, or along y at column
// ix = index, restricted to [start_um, start_um + length_um] along that axis
// (positions are measured from the map origin). Returns (position, value)
// pairs at pixel centers. Out-of-range index or empty window -> RangeError.
template <typename MapT>
std::vector<std::pair<double, double>> line_trace(const MapT& map, TraceAxis axis,
                                                  int index, double length_um,
                                                  double start_um = 0.0);

// (mean(on) - mean(off)) / std(on) with the sample (N-1) standard deviation.
// Empty input -> DomainError; zero std -> FitError (degenerate trace).
double snr(const std::vector<double>& trace_on, const std::vector<double>& trace_off);

// Electrically active dopant fraction: 100 * n_hall / n_xrf [%], relative
// errors combined in quadrature. Nonpositive density -> DomainError.
Measured activation_percent(const Measured& n_xrf_per_cm2, const Measured& n_hall_per_cm2);

}  // namespace dmet
