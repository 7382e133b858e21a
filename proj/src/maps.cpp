#include "dmet/maps.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "dmet/errors.hpp"

namespace dmet {

double IntensityMap::at(int ix, int iy) const {
  return amplitude[index(ix, iy)];
}

std::size_t IntensityMap::index(int ix, int iy) const {
  if (ix < 0 || ix >= nx || iy < 0 || iy >= ny)
    throw RangeError("map pixel (" + std::to_string(ix) + ", " + std::to_string(iy) +
                     ") outside " + std::to_string(nx) + "x" + std::to_string(ny));
  return static_cast<std::size_t>(iy) * nx + ix;
}

double DensityMap::at(int ix, int iy) const {
  return density_per_cm2[index(ix, iy)];
}

std::size_t DensityMap::index(int ix, int iy) const {
  if (ix < 0 || ix >= nx || iy < 0 || iy >= ny)
    throw RangeError("map pixel (" + std::to_string(ix) + ", " + std::to_string(iy) +
                     ") outside " + std::to_string(nx) + "x" + std::to_string(ny));
  return static_cast<std::size_t>(iy) * nx + ix;
}

std::map<std::string, IntensityMap> decompose_scan(const ScanGrid& grid,
                                                   const std::vector<ElementTemplate>& templates,
                                                   const ScatterModel& scatter,
                                                   int background_order, int threads,
                                                   Weighting weighting) {
  grid.validate();
  // Structural problems (degenerate templates, bad grids) surface here, once,
  // before any per-pixel work.
  SpectrumFitter fitter(templates, scatter, background_order, grid.detector, weighting);

  std::map<std::string, IntensityMap> maps;
  for (const auto& element : templates) {
    IntensityMap m;
    m.nx = grid.nx;
    m.ny = grid.ny;
    m.pitch_x_um = grid.pitch_x_um;
    m.pitch_y_um = grid.pitch_y_um;
    m.origin_x_um = grid.origin_x_um;
    m.origin_y_um = grid.origin_y_um;
    m.element = element.symbol;
    m.dwell_s = grid.beam.dwell_s;
    m.fingerprint = conditions_fingerprint(grid.beam, grid.detector);
    std::size_t n = grid.pixels.size();
    m.amplitude.assign(n, 0.0);
    m.std_error.assign(n, 0.0);
    m.failed.assign(n, 0);
    maps.emplace(element.symbol, std::move(m));
  }

  std::size_t n_pixels = grid.pixels.size();
  std::vector<std::string> failures(n_pixels);
  std::atomic<bool> aborted{false};
  std::exception_ptr structural = nullptr;
  std::mutex structural_mutex;

  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end && !aborted.load(); ++i) {
      try {
        DecompositionResult r = fitter.fit(grid.pixels[i]);
        for (const auto& est : r.elements) {
          IntensityMap& m = maps.at(est.name);
          m.amplitude[i] = est.amplitude;
          m.std_error[i] = est.std_error;
        }
      } catch (const FitError& e) {
        // Per-pixel numerical failure: flag the pixel, keep the grid
        // rectangular, carry the cause.
        failures[i] = e.what();
        for (auto& [symbol, m] : maps) m.failed[i] = 1;
      } catch (const Error& e) {
        // Structural problem: propagate with the pixel attached.
        std::lock_guard<std::mutex> lock(structural_mutex);
        if (!structural)
          structural = std::make_exception_ptr(
              Error(e.exit_code(), "pixel (" + std::to_string(i % grid.nx) + ", " +
                                       std::to_string(i / grid.nx) + "): " + e.what()));
        aborted.store(true);
        return;
      } catch (...) {
        std::lock_guard<std::mutex> lock(structural_mutex);
        if (!structural) structural = std::current_exception();
        aborted.store(true);
        return;
      }
    }
  };

  int n_threads = std::max(1, std::min<int>(threads, static_cast<int>(n_pixels)));
  if (n_threads == 1) {
    run_range(0, n_pixels);
  } else {
    std::vector<std::thread> pool;
    std::size_t chunk = (n_pixels + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      std::size_t b = t * chunk, e = std::min(n_pixels, b + chunk);
      if (b >= e) break;
      pool.emplace_back(run_range, b, e);
    }
    for (auto& th : pool) th.join();
  }
  if (structural) std::rethrow_exception(structural);

  for (std::size_t i = 0; i < n_pixels; ++i)
    if (!failures[i].empty()) {
      std::string where = "pixel (" + std::to_string(i % grid.nx) + ", " +
                          std::to_string(i / grid.nx) + "): " + failures[i];
      for (auto& [symbol, m] : maps) m.failure_reason[static_cast<int>(i)] = where;
    }
  return maps;
}

IntensityMap element_map(const ScanGrid& grid, const std::string& element,
                         const std::vector<ElementTemplate>& templates,
                         const ScatterModel& scatter, int background_order, int threads,
                         Weighting weighting) {
  bool found = false;
  for (const auto& t : templates) found = found || t.symbol == element;
  if (!found) throw ConfigError("element_map: '" + element + "' is not among the templates");
  auto maps = decompose_scan(grid, templates, scatter, background_order, threads, weighting);
  return std::move(maps.at(element));
}

CalibrationFactor calibrate_reference(const Measured& ref_amplitude_counts,
                                      const Measured& known_density_per_cm2,
                                      const std::string& element, std::uint64_t fingerprint) {
  if (ref_amplitude_counts.value <= 0)
    throw DomainError("calibrate_reference: reference amplitude must be > 0");
  if (known_density_per_cm2.value <= 0)
    throw DomainError("calibrate_reference: known density must be > 0");
  CalibrationFactor f;
  f.element = element;
  f.factor_cm2_per_count = known_density_per_cm2.value / ref_amplitude_counts.value;
  f.relative_error = quadrature(ref_amplitude_counts.relative_error(),
                                known_density_per_cm2.relative_error());
  f.fingerprint = fingerprint;
  return f;
}

DensityMap quantify_map(const IntensityMap& map, const CalibrationFactor& calibration) {
  if (map.element != calibration.element)
    throw CalibrationError("quantify: calibration is for '" + calibration.element +
                           "', map is '" + map.element + "'");
  if (map.fingerprint != calibration.fingerprint)
    throw CalibrationError("quantify: calibration acquired under different "
                           "beam/detector conditions (fingerprint mismatch)");
  DensityMap d;
  d.nx = map.nx;
  d.ny = map.ny;
  d.pitch_x_um = map.pitch_x_um;
  d.pitch_y_um = map.pitch_y_um;
  d.origin_x_um = map.origin_x_um;
  d.origin_y_um = map.origin_y_um;
  d.element = map.element;
  d.failed = map.failed;
  d.density_per_cm2.resize(map.amplitude.size());
  d.uncertainty_per_cm2.resize(map.amplitude.size());
  double k = calibration.factor_cm2_per_count;
  for (std::size_t i = 0; i < map.amplitude.size(); ++i) {
    double density = map.amplitude[i] * k;
    // Counting error scales with the factor; the calibration's relative error
    // applies to the converted value. Independent, so quadrature.
    double counting = map.std_error[i] * k;
    double calib = std::abs(density) * calibration.relative_error;
    d.density_per_cm2[i] = density;
    d.uncertainty_per_cm2[i] = std::sqrt(counting * counting + calib * calib);
  }
  return d;
}

namespace {

template <typename MapT>
const std::vector<double>& map_values(const MapT& m);

template <>
const std::vector<double>& map_values<IntensityMap>(const IntensityMap& m) {
  return m.amplitude;
}

template <>
const std::vector<double>& map_values<DensityMap>(const DensityMap& m) {
  return m.density_per_cm2;
}

}  // namespace

template <typename MapT>
std::vector<std::pair<double, double>> line_trace(const MapT& map, TraceAxis axis,
                                                  int index, double length_um,
                                                  double start_um) {
  if (length_um <= 0) throw RangeError("line_trace: window length must be > 0");
  const std::vector<double>& values = map_values(map);
  int lanes = axis == TraceAxis::x ? map.ny : map.nx;
  int along = axis == TraceAxis::x ? map.nx : map.ny;
  double pitch = axis == TraceAxis::x ? map.pitch_x_um : map.pitch_y_um;
  if (index < 0 || index >= lanes)
    throw RangeError("line_trace: lane index " + std::to_string(index) + " outside [0, " +
                     std::to_string(lanes) + ")");
  if (start_um < 0 || start_um + length_um > along * pitch + 1e-9)
    throw RangeError("line_trace: window outside the map");
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < along; ++i) {
    double pos = (i + 0.5) * pitch;  // relative to the map origin
    if (pos < start_um || pos > start_um + length_um) continue;
    std::size_t idx = axis == TraceAxis::x
                          ? static_cast<std::size_t>(index) * map.nx + i
                          : static_cast<std::size_t>(i) * map.nx + index;
    out.emplace_back(pos, values[idx]);
  }
  if (out.empty()) throw RangeError("line_trace: window contains no pixel centers");
  return out;
}

template std::vector<std::pair<double, double>> line_trace<IntensityMap>(
    const IntensityMap&, TraceAxis, int, double, double);
template std::vector<std::pair<double, double>> line_trace<DensityMap>(
    const DensityMap&, TraceAxis, int, double, double);

double snr(const std::vector<double>& trace_on, const std::vector<double>& trace_off) {
  if (trace_on.empty() || trace_off.empty())
    throw DomainError("snr: traces must be nonempty");
  auto mean = [](const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  double mean_on = mean(trace_on);
  double mean_off = mean(trace_off);
  // Sample standard deviation (N-1 denominator).
  if (trace_on.size() < 2) throw FitError("snr: degenerate on-trace (no spread)");
  double ss = 0;
  for (double x : trace_on) ss += (x - mean_on) * (x - mean_on);
  double sd = std::sqrt(ss / static_cast<double>(trace_on.size() - 1));
  if (sd == 0) throw FitError("snr: degenerate on-trace (zero standard deviation)");
  return (mean_on - mean_off) / sd;
}

Measured activation_percent(const Measured& n_xrf_per_cm2, const Measured& n_hall_per_cm2) {
  if (n_xrf_per_cm2.value <= 0 || n_hall_per_cm2.value <= 0)
    throw DomainError("activation: densities must be > 0");
  Measured ratio = div(n_hall_per_cm2, n_xrf_per_cm2);
  return scaled(ratio, 100.0);
}

}  // namespace dmet
