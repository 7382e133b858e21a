#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dmet/decompose.hpp"
#include "dmet/elements.hpp"
#include "dmet/hall.hpp"
#include "dmet/layout.hpp"
#include "dmet/measured.hpp"
#include "dmet/types.hpp"
#include "dmet/wl_fit.hpp"

namespace dmet {

// Spectrum-decomposition options shared by fit-spectrum/map/quantify/snr.
struct AnalysisOptions {
  int background_order = 2;
  Weighting weighting = Weighting::poisson;
  bool include_elastic = true;
  bool include_compton = true;
};

// One line-trace window for the snr subcommand.
struct TraceWindow {
  std::string axis = "x";  // "x" | "y"
  int index = 0;           // row for x traces, column for y traces
  double start_um = 0.0;
  double length_um = 30.0;
};

// Everything a pipeline run needs, loaded from one JSON file. Keys mirror the
// field names below (units spelled in the names). Any key absent from the
// file keeps its default and is recorded in `defaulted`, which the report
// echoes. Unknown keys and missing referenced files fail the load.
struct RunConfig {
  std::uint64_t seed = 1;
  std::string output_dir = "out";
  int threads = 1;              // <= 0 picks the hardware concurrency
  std::string format = "csv";   // scan container format: csv | packed

  BeamConfig beam;
  DetectorConfig detector;
  std::string layout = "demo:1";         // demo:N | demo-reference:N | JSON path
  std::string element_table = "builtin"; // builtin | JSON path
  AnalysisOptions analysis;
  FitOptions fit;

  // simulate
  int nx = 80, ny = 40;
  double pitch_x_um = 0.5, pitch_y_um = 0.5;
  double origin_x_um = 0.0, origin_y_um = 0.0;

  std::string element = "As";  // target of map/quantify/snr

  // File inputs; every non-empty path must exist at load time.
  std::string spectrum_path;        // fit-spectrum
  std::string scan_path;            // map | quantify | snr
  std::string reference_scan_path;  // quantify
  Measured reference_density_per_cm2{0.0, 0.0};
  std::string perpendicular_path;   // wl-fit
  std::string parallel_path;        // wl-fit (optional)
  std::string tilt_path;            // wl-fit (optional)
  std::string hall_path;            // hall
  Measured sigma_sheet_S{0.0, 0.0};

  // thickness inputs
  Measured Lphi_nm{0.0, 0.0};
  Measured L_nm{0.0, 0.0};
  Measured n_per_cm2{0.0, 0.0};
  Measured gamma_per_T2{0.0, 0.0};

  TraceWindow snr_on;
  TraceWindow snr_off;

  // compare: demo:before | demo:after | run-summary JSON path
  std::string before = "demo:before";
  std::string after = "demo:after";
  double k_sigma = 2.0;

  int device = 1;  // report subcommand fixture

  std::vector<std::string> defaulted;  // config keys that fell back to defaults
};

// Parse and validate a config file. ParseError on malformed JSON; ConfigError
// on unknown keys, bad values, or missing referenced paths.
RunConfig load_run_config(const std::string& path);

// The all-defaults config (every key listed in `defaulted`).
RunConfig default_run_config();

// Resolve a layout spec: "demo:1", "demo:2", "demo-reference:1",
// "demo-reference:2", or a path to a layout JSON file.
DeviceLayout load_device_layout(const std::string& spec);
void write_device_layout(const std::string& path, const DeviceLayout& layout);

// Resolve an element table spec: "builtin" or a path to a table JSON file.
std::vector<ElementTemplate> load_element_table(const std::string& spec);
void write_element_table(const std::string& path,
                         const std::vector<ElementTemplate>& table);

// Resolve a run summary spec: "demo:before", "demo:after", or a path to a
// summary JSON file (as written by write_run_summary).
RunSummary load_run_summary(const std::string& spec);
void write_run_summary(const std::string& path, const RunSummary& run);

}  // namespace dmet
