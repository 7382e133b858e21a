#include "dmet/io/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>
#include <thread>

#include "dmet/demo.hpp"
#include "dmet/errors.hpp"
#include "dmet/forward.hpp"
#include "dmet/hall.hpp"
#include "dmet/io/pgm.hpp"
#include "dmet/io/scan_io.hpp"
#include "dmet/io/spectrum_io.hpp"
#include "dmet/io/transport_io.hpp"
#include "dmet/maps.hpp"
#include "dmet/wl.hpp"
#include "dmet/wl_fit.hpp"
#include "text_util.hpp"

namespace dmet {

namespace fs = std::filesystem;
using textio::fmt;
using Json = OrderedJson;

namespace {

const char* error_class(ExitCode code) {
  switch (code) {
    case ExitCode::parse: return "parse";
    case ExitCode::fit: return "fit";
    case ExitCode::calibration: return "calibration";
    case ExitCode::config: return "config";
    default: return "ok";
  }
}

int resolve_threads(int configured) {
  if (configured > 0) return configured;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

void require_path(const std::string& value, const char* key, const char* subcommand) {
  if (value.empty())
    throw ConfigError(std::string(subcommand) + " needs " + key);
}

Json measured_or_null(const std::optional<Measured>& m) {
  return m ? measured_json(*m) : Json(nullptr);
}

Json amplitude_json(const AmplitudeEstimate& a) {
  Json j;
  j["name"] = a.name;
  j["amplitude"] = a.amplitude;
  j["std_error"] = a.std_error;
  j["at_bound"] = a.at_bound;
  return j;
}

Json diagnostics_json(const FitDiagnostics& d) {
  Json j;
  j["converged"] = d.converged;
  j["iterations"] = d.iterations;
  j["chi2"] = d.chi2;
  j["reduced_chi2"] = d.reduced_chi2;
  if (!d.message.empty()) j["message"] = d.message;
  return j;
}

ScatterModel scatter_model(const RunConfig& cfg, const DeviceLayout& layout) {
  ScatterModel m;
  m.beam_energy_keV = cfg.beam.photon_energy_keV;
  m.angle_deg = layout.scatter.angle_deg;
  m.include_elastic = cfg.analysis.include_elastic;
  m.include_compton = cfg.analysis.include_compton;
  return m;
}

std::string out_path(const RunConfig& cfg, const std::string& name) {
  return (fs::path(cfg.output_dir) / name).string();
}

void write_map_csv(const std::string& path, const IntensityMap& map) {
  std::ostringstream out;
  out << "# element " << map.element << "\n";
  out << "# amplitude: integrated counts per " << fmt(map.dwell_s) << " s dwell\n";
  out << "# nx " << map.nx << " ny " << map.ny << " pitch_um " << fmt(map.pitch_x_um)
      << " " << fmt(map.pitch_y_um) << " origin_um " << fmt(map.origin_x_um) << " "
      << fmt(map.origin_y_um) << "\n";
  out << "# fingerprint " << map.fingerprint << "\n";
  out << "# ix,iy,x_um,y_um,amplitude,std_error,failed\n";
  for (int iy = 0; iy < map.ny; ++iy)
    for (int ix = 0; ix < map.nx; ++ix) {
      std::size_t k = map.index(ix, iy);
      out << ix << "," << iy << ","
          << fmt(map.origin_x_um + (ix + 0.5) * map.pitch_x_um) << ","
          << fmt(map.origin_y_um + (iy + 0.5) * map.pitch_y_um) << ","
          << fmt(map.amplitude[k]) << "," << fmt(map.std_error[k]) << ","
          << int(map.failed[k]) << "\n";
    }
  write_text_file(path, out.str());
}

void write_map_csv(const std::string& path, const DensityMap& map) {
  std::ostringstream out;
  out << "# element " << map.element << "\n";
  out << "# density: areal density [cm^-2]\n";
  out << "# nx " << map.nx << " ny " << map.ny << " pitch_um " << fmt(map.pitch_x_um)
      << " " << fmt(map.pitch_y_um) << " origin_um " << fmt(map.origin_x_um) << " "
      << fmt(map.origin_y_um) << "\n";
  out << "# ix,iy,x_um,y_um,density_per_cm2,uncertainty_per_cm2,failed\n";
  for (int iy = 0; iy < map.ny; ++iy)
    for (int ix = 0; ix < map.nx; ++ix) {
      std::size_t k = map.index(ix, iy);
      out << ix << "," << iy << ","
          << fmt(map.origin_x_um + (ix + 0.5) * map.pitch_x_um) << ","
          << fmt(map.origin_y_um + (iy + 0.5) * map.pitch_y_um) << ","
          << fmt(map.density_per_cm2[k]) << "," << fmt(map.uncertainty_per_cm2[k])
          << "," << int(map.failed[k]) << "\n";
    }
  write_text_file(path, out.str());
}

struct MapStats {
  int n_ok = 0;
  int n_failed = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

MapStats map_stats(const std::vector<double>& values,
                   const std::vector<std::uint8_t>& failed) {
  MapStats s;
  double sum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (failed[k]) {
      ++s.n_failed;
      continue;
    }
    if (s.n_ok == 0) {
      s.min = s.max = values[k];
    } else {
      s.min = std::min(s.min, values[k]);
      s.max = std::max(s.max, values[k]);
    }
    sum += values[k];
    ++s.n_ok;
  }
  if (s.n_ok > 0) s.mean = sum / s.n_ok;
  return s;
}

Json stats_json(const MapStats& s) {
  Json j;
  j["pixels_ok"] = s.n_ok;
  j["pixels_failed"] = s.n_failed;
  j["mean"] = s.mean;
  j["min"] = s.min;
  j["max"] = s.max;
  return j;
}

// Mean amplitude of the non-failed pixels with the standard error of the
// mean, for calibration against a uniform reference scan.
Measured mean_amplitude(const IntensityMap& map) {
  double sum = 0.0;
  int n = 0;
  for (std::size_t k = 0; k < map.amplitude.size(); ++k)
    if (!map.failed[k]) {
      sum += map.amplitude[k];
      ++n;
    }
  if (n == 0) throw FitError("reference map: every pixel fit failed");
  double mean = sum / n;
  double ss = 0.0;
  for (std::size_t k = 0; k < map.amplitude.size(); ++k)
    if (!map.failed[k]) ss += (map.amplitude[k] - mean) * (map.amplitude[k] - mean);
  double sem = n > 1 ? std::sqrt(ss / (double(n) * (n - 1))) : 0.0;
  return {mean, sem};
}

IntensityMap build_element_map(const RunConfig& cfg, const ScanGrid& grid,
                               std::vector<std::string>& written) {
  auto table = load_element_table(cfg.element_table);
  DeviceLayout layout = load_device_layout(cfg.layout);
  ScatterModel scatter;
  scatter.beam_energy_keV = grid.beam.photon_energy_keV;
  scatter.angle_deg = layout.scatter.angle_deg;
  scatter.include_elastic = cfg.analysis.include_elastic;
  scatter.include_compton = cfg.analysis.include_compton;
  (void)written;
  return element_map(grid, cfg.element, table, scatter, cfg.analysis.background_order,
                     resolve_threads(cfg.threads), cfg.analysis.weighting);
}

std::vector<double> trace_values(const std::vector<std::pair<double, double>>& trace) {
  std::vector<double> v;
  v.reserve(trace.size());
  for (const auto& [pos, val] : trace) v.push_back(val);
  return v;
}

Json trace_json(const std::vector<std::pair<double, double>>& trace,
                const TraceWindow& window) {
  Json j;
  j["axis"] = window.axis;
  j["index"] = window.index;
  j["start_um"] = window.start_um;
  j["length_um"] = window.length_um;
  j["points"] = trace.size();
  double sum = 0.0;
  for (const auto& [pos, val] : trace) sum += val;
  j["mean"] = trace.empty() ? 0.0 : sum / double(trace.size());
  return j;
}

TraceAxis parse_axis(const std::string& axis) {
  return axis == "y" ? TraceAxis::y : TraceAxis::x;
}

void run_simulate(const RunConfig& cfg, Json& report,
                  std::vector<std::string>& written) {
  DeviceLayout layout = load_device_layout(cfg.layout);
  auto table = load_element_table(cfg.element_table);
  ScanGrid grid = simulate_scan(layout, cfg.beam, cfg.detector, cfg.nx, cfg.ny,
                                cfg.pitch_x_um, cfg.pitch_y_um, cfg.seed,
                                cfg.origin_x_um, cfg.origin_y_um, table,
                                resolve_threads(cfg.threads));

  std::string scan_name = cfg.format == "packed" ? "scan.bin" : "scan";
  std::string scan_path = out_path(cfg, scan_name);
  write_scan(scan_path, grid, parse_scan_format(cfg.format));
  written.push_back(scan_path);

  std::vector<double> totals(static_cast<std::size_t>(grid.nx) * grid.ny, 0.0);
  for (std::size_t p = 0; p < grid.pixels.size(); ++p)
    for (double c : grid.pixels[p].counts) totals[p] += c;
  std::string pgm_path = out_path(cfg, "scan_counts.pgm");
  write_pgm16(pgm_path, grid.nx, grid.ny, totals,
              {"total counts per pixel", "layout " + cfg.layout});
  written.push_back(pgm_path);

  report["layout"] = cfg.layout;
  report["nx"] = grid.nx;
  report["ny"] = grid.ny;
  report["pitch_x_um"] = grid.pitch_x_um;
  report["pitch_y_um"] = grid.pitch_y_um;
  report["origin_x_um"] = grid.origin_x_um;
  report["origin_y_um"] = grid.origin_y_um;
  report["format"] = cfg.format;
  report["fingerprint"] = conditions_fingerprint(grid.beam, grid.detector);
  report["scan"] = scan_path;
  MapStats totals_stats = map_stats(totals, std::vector<std::uint8_t>(totals.size(), 0));
  report["counts"] = stats_json(totals_stats);
}

void run_fit_spectrum(const RunConfig& cfg, Json& report,
                      std::vector<std::string>& written) {
  (void)written;
  require_path(cfg.spectrum_path, "spectrum_path", "fit-spectrum");
  Spectrum spectrum = parse_spectrum_file(cfg.spectrum_path);
  auto table = load_element_table(cfg.element_table);
  DeviceLayout layout = load_device_layout(cfg.layout);
  DecompositionResult fit =
      fit_spectrum(spectrum, table, scatter_model(cfg, layout),
                   cfg.analysis.background_order, cfg.detector, cfg.analysis.weighting);

  report["spectrum"] = cfg.spectrum_path;
  report["bins"] = spectrum.size();
  report["weighting"] = weighting_tag(cfg.analysis.weighting);
  report["background_order"] = cfg.analysis.background_order;
  report["elements"] = Json::array();
  for (const AmplitudeEstimate& a : fit.elements)
    report["elements"].push_back(amplitude_json(a));
  report["scatter"] = Json::array();
  for (const AmplitudeEstimate& a : fit.scatter)
    report["scatter"].push_back(amplitude_json(a));
  report["background"] = fit.background;
  report["background_error"] = fit.background_error;
  report["residual_norm"] = fit.residual_norm;
  report["reduced_chi2"] = fit.reduced_chi2;
}

void run_map(const RunConfig& cfg, Json& report, std::vector<std::string>& written) {
  require_path(cfg.scan_path, "scan_path", "map");
  ScanGrid grid = read_scan(cfg.scan_path);
  IntensityMap map = build_element_map(cfg, grid, written);

  std::string csv_path = out_path(cfg, "map_" + cfg.element + ".csv");
  write_map_csv(csv_path, map);
  written.push_back(csv_path);
  std::string pgm_path = out_path(cfg, "map_" + cfg.element + ".pgm");
  write_pgm16(pgm_path, map.nx, map.ny, map.amplitude,
              {"element " + cfg.element + " amplitude [counts]"});
  written.push_back(pgm_path);

  report["element"] = cfg.element;
  report["scan"] = cfg.scan_path;
  report["nx"] = map.nx;
  report["ny"] = map.ny;
  report["fingerprint"] = map.fingerprint;
  report["weighting"] = weighting_tag(cfg.analysis.weighting);
  report["amplitude"] = stats_json(map_stats(map.amplitude, map.failed));
  report["map_csv"] = csv_path;
}

void run_quantify(const RunConfig& cfg, Json& report,
                  std::vector<std::string>& written) {
  require_path(cfg.scan_path, "scan_path", "quantify");
  require_path(cfg.reference_scan_path, "reference_scan_path", "quantify");
  if (cfg.reference_density_per_cm2.value <= 0.0)
    throw ConfigError("quantify needs reference_density_per_cm2 > 0");

  ScanGrid grid = read_scan(cfg.scan_path);
  ScanGrid ref_grid = read_scan(cfg.reference_scan_path);
  IntensityMap map = build_element_map(cfg, grid, written);
  IntensityMap ref_map = build_element_map(cfg, ref_grid, written);

  Measured ref_amplitude = mean_amplitude(ref_map);
  CalibrationFactor calibration =
      calibrate_reference(ref_amplitude, cfg.reference_density_per_cm2, cfg.element,
                          ref_map.fingerprint);
  DensityMap density = quantify_map(map, calibration);

  std::string csv_path = out_path(cfg, "density_" + cfg.element + ".csv");
  write_map_csv(csv_path, density);
  written.push_back(csv_path);
  std::string pgm_path = out_path(cfg, "density_" + cfg.element + ".pgm");
  write_pgm16(pgm_path, density.nx, density.ny, density.density_per_cm2,
              {"element " + cfg.element + " density [cm^-2]"});
  written.push_back(pgm_path);

  report["element"] = cfg.element;
  report["scan"] = cfg.scan_path;
  report["reference_scan"] = cfg.reference_scan_path;
  report["fingerprint"] = map.fingerprint;
  report["reference_amplitude"] = measured_json(ref_amplitude);
  report["reference_density_per_cm2"] = measured_json(cfg.reference_density_per_cm2);
  Json cal;
  cal["factor_cm2_per_count"] = calibration.factor_cm2_per_count;
  cal["relative_error"] = calibration.relative_error;
  report["calibration"] = cal;
  report["density_per_cm2"] = stats_json(map_stats(density.density_per_cm2, density.failed));
  report["map_csv"] = csv_path;
}

void run_snr(const RunConfig& cfg, Json& report, std::vector<std::string>& written) {
  require_path(cfg.scan_path, "scan_path", "snr");
  ScanGrid grid = read_scan(cfg.scan_path);
  IntensityMap map = build_element_map(cfg, grid, written);

  auto on = line_trace(map, parse_axis(cfg.snr_on.axis), cfg.snr_on.index,
                       cfg.snr_on.length_um, cfg.snr_on.start_um);
  auto off = line_trace(map, parse_axis(cfg.snr_off.axis), cfg.snr_off.index,
                        cfg.snr_off.length_um, cfg.snr_off.start_um);
  double value = snr(trace_values(on), trace_values(off));

  report["element"] = cfg.element;
  report["scan"] = cfg.scan_path;
  report["fingerprint"] = map.fingerprint;
  report["snr"] = value;
  report["on"] = trace_json(on, cfg.snr_on);
  report["off"] = trace_json(off, cfg.snr_off);
}

void run_wl_fit(const RunConfig& cfg, Json& report,
                std::vector<std::string>& written) {
  require_path(cfg.perpendicular_path, "perpendicular_path", "wl-fit");
  MagnetoTrace perp_trace = parse_transport_file(cfg.perpendicular_path);
  PerpFitResult perp = fit_perp(perp_trace, cfg.fit);

  RunSummary summary;
  summary.label = "wl-fit";
  summary.L_nm = perp.L_nm;
  summary.Lphi_nm = perp.Lphi_nm;

  report["perpendicular"] = cfg.perpendicular_path;
  report["L_nm"] = measured_json(perp.L_nm);
  report["L_phi_nm"] = measured_json(perp.Lphi_nm);
  report["covariance_nm2"] = {
      {perp.covariance[0][0], perp.covariance[0][1]},
      {perp.covariance[1][0], perp.covariance[1][1]}};
  report["validity_warning"] = perp.validity_warning;
  report["perpendicular_fit"] = diagnostics_json(perp.diagnostics);

  std::optional<Measured> gamma;
  if (!cfg.parallel_path.empty()) {
    MagnetoTrace par_trace = parse_transport_file(cfg.parallel_path);
    ScalarFitResult par = fit_parallel(par_trace, cfg.fit);
    gamma = par.value;
    summary.gamma_per_T2 = par.value;
    report["parallel"] = cfg.parallel_path;
    report["gamma_per_T2"] = measured_json(par.value);
    report["gamma_infinite_relative_error"] = par.infinite_relative_error;
    report["parallel_fit"] = diagnostics_json(par.diagnostics);
  }
  if (!cfg.tilt_path.empty()) {
    if (!gamma)
      throw ConfigError("wl-fit: tilt_path requires parallel_path (gamma enters the "
                        "tilt model)");
    MagnetoTrace tilt_trace = parse_transport_file(cfg.tilt_path);
    ScalarFitResult tilt = fit_tilt(tilt_trace, perp.L_nm.value, perp.Lphi_nm.value,
                                    gamma->value, cfg.fit);
    summary.p = tilt.value;
    report["tilt"] = cfg.tilt_path;
    report["p"] = measured_json(tilt.value);
    report["tilt_fit"] = diagnostics_json(tilt.diagnostics);
  }
  if (gamma && cfg.n_per_cm2.value > 0.0) {
    Measured t = thickness_nm(perp.Lphi_nm, perp.L_nm, cfg.n_per_cm2, *gamma);
    summary.n_per_cm2 = cfg.n_per_cm2;
    summary.t_nm = t;
    report["n_per_cm2"] = measured_json(cfg.n_per_cm2);
    report["t_nm"] = measured_json(t);
  }

  std::string summary_path = out_path(cfg, "wl_fit_summary.json");
  write_run_summary(summary_path, summary);
  written.push_back(summary_path);
  report["summary"] = summary_path;
}

void run_hall(const RunConfig& cfg, Json& report, std::vector<std::string>& written) {
  require_path(cfg.hall_path, "hall_path", "hall");
  if (cfg.sigma_sheet_S.value <= 0.0)
    throw ConfigError("hall needs sigma_sheet_S > 0");
  MagnetoTrace trace = parse_transport_file(cfg.hall_path);
  HallResult hall = hall_analysis(trace, cfg.sigma_sheet_S);

  RunSummary summary;
  summary.label = "hall";
  summary.n_per_cm2 = hall.n_per_cm2;
  summary.mu_cm2_Vs = hall.mu_cm2_Vs;
  summary.L_nm = hall.L_nm;
  std::string summary_path = out_path(cfg, "hall_summary.json");
  write_run_summary(summary_path, summary);
  written.push_back(summary_path);

  report["trace"] = cfg.hall_path;
  report["sigma_sheet_S"] = measured_json(cfg.sigma_sheet_S);
  report["slope_ohm_per_T"] = measured_json(hall.slope_ohm_per_T);
  report["intercept_ohm"] = hall.intercept_ohm;
  report["reduced_chi2"] = hall.reduced_chi2;
  report["n_per_cm2"] = measured_json(hall.n_per_cm2);
  report["mu_cm2_Vs"] = measured_json(hall.mu_cm2_Vs);
  report["L_nm"] = measured_json(hall.L_nm);
  report["summary"] = summary_path;
}

void run_thickness(const RunConfig& cfg, Json& report,
                   std::vector<std::string>& written) {
  (void)written;
  Measured t = thickness_nm(cfg.Lphi_nm, cfg.L_nm, cfg.n_per_cm2, cfg.gamma_per_T2);
  report["L_phi_nm"] = measured_json(cfg.Lphi_nm);
  report["L_nm"] = measured_json(cfg.L_nm);
  report["n_per_cm2"] = measured_json(cfg.n_per_cm2);
  report["gamma_per_T2"] = measured_json(cfg.gamma_per_T2);
  report["t_nm"] = measured_json(t);
  report["t_angstrom"] = measured_json(scaled(t, 10.0));
}

void run_compare(const RunConfig& cfg, Json& report,
                 std::vector<std::string>& written) {
  (void)written;
  RunSummary before = load_run_summary(cfg.before);
  RunSummary after = load_run_summary(cfg.after);
  ComparisonReport cmp = compare_runs(before, after, cfg.k_sigma);

  report["before"] = before.label;
  report["after"] = after.label;
  report["k_sigma"] = cmp.k_sigma;
  report["entries"] = Json::array();
  for (const ComparisonEntry& e : cmp.entries) {
    Json j;
    j["quantity"] = e.quantity;
    j["unit"] = e.unit;
    j["before"] = measured_or_null(e.before);
    j["after"] = measured_or_null(e.after);
    j["missing"] = e.missing;
    if (!e.missing) {
      j["difference"] = e.difference;
      j["combined_error"] = e.combined_error;
      j["z"] = e.z;
      j["consistent"] = e.consistent;
    }
    report["entries"].push_back(std::move(j));
  }
  report["all_consistent"] = cmp.all_consistent;
  report["thickness_delta_angstrom"] = cmp.thickness_delta_angstrom
                                           ? Json(*cmp.thickness_delta_angstrom)
                                           : Json(nullptr);
}

void run_report(const RunConfig& cfg, Json& report,
                std::vector<std::string>& written) {
  (void)written;
  ExternalReference ext = demo_external_reference(cfg.device);
  double truth = demo_truth_density_per_cm2(cfg.device);
  Measured n_xrf{truth, 0.05 * truth};
  std::optional<Measured> n_hall;
  std::optional<Measured> t_mr;
  if (cfg.device == 1) {
    RunSummary transport = demo_transport_before();
    n_hall = transport.n_per_cm2;
    t_mr = transport.t_nm;
  }

  report["device"] = cfg.device;
  report["n_stm_per_cm2"] = measured_or_null(ext.n_stm_cm2);
  report["n_xrf_per_cm2"] = measured_json(n_xrf);
  report["n_hall_per_cm2"] = measured_or_null(n_hall);
  report["n_sims_per_cm2"] = measured_or_null(ext.n_sims_cm2);
  report["t_sims_nm"] = measured_or_null(ext.t_sims_nm);
  report["t_mr_nm"] = measured_or_null(t_mr);
  report["activation_percent"] =
      n_hall ? Json(measured_json(activation_percent(n_xrf, *n_hall))) : Json(nullptr);
}

void dispatch(const RunConfig& cfg, const std::string& subcommand, Json& report,
              std::vector<std::string>& written) {
  if (subcommand == "simulate") return run_simulate(cfg, report, written);
  if (subcommand == "fit-spectrum") return run_fit_spectrum(cfg, report, written);
  if (subcommand == "map") return run_map(cfg, report, written);
  if (subcommand == "quantify") return run_quantify(cfg, report, written);
  if (subcommand == "snr") return run_snr(cfg, report, written);
  if (subcommand == "wl-fit") return run_wl_fit(cfg, report, written);
  if (subcommand == "hall") return run_hall(cfg, report, written);
  if (subcommand == "thickness") return run_thickness(cfg, report, written);
  if (subcommand == "compare") return run_compare(cfg, report, written);
  if (subcommand == "report") return run_report(cfg, report, written);
  std::string all;
  for (const std::string& s : pipeline_subcommands()) all += (all.empty() ? "" : ", ") + s;
  throw ConfigError("unknown subcommand '" + subcommand + "' (expected one of: " + all +
                    ")");
}

}  // namespace

const std::vector<std::string>& pipeline_subcommands() {
  static const std::vector<std::string> commands = {
      "simulate", "fit-spectrum", "map",  "quantify",  "snr",
      "wl-fit",   "hall",         "thickness", "compare", "report"};
  return commands;
}

PipelineResult run_pipeline(const RunConfig& config, const std::string& subcommand) {
  PipelineResult result;
  Json& report = result.report;
  report["tool"] = tool_name();
  report["version"] = tool_version();
  report["subcommand"] = subcommand;
  report["seed"] = config.seed;

  try {
    fs::create_directories(config.output_dir);
    dispatch(config, subcommand, report, result.written);
  } catch (const Error& e) {
    Json err;
    err["class"] = error_class(e.exit_code());
    err["message"] = e.what();
    err["exit_code"] = static_cast<int>(e.exit_code());
    report["error"] = err;
    result.exit_code = static_cast<int>(e.exit_code());
  } catch (const std::exception& e) {
    Json err;
    err["class"] = "internal";
    err["message"] = e.what();
    err["exit_code"] = 1;
    report["error"] = err;
    result.exit_code = 1;
  }

  report["defaulted"] = config.defaulted;
  try {
    std::string report_path = (fs::path(config.output_dir) / "report.json").string();
    write_text_file(report_path, render_json(report));
    result.written.push_back(report_path);
  } catch (const Error&) {
    if (result.exit_code == 0) result.exit_code = static_cast<int>(ExitCode::config);
  }
  return result;
}

}  // namespace dmet
