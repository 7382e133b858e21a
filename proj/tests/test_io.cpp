#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "dmet/demo.hpp"
#include "dmet/elements.hpp"
#include "dmet/errors.hpp"
#include "dmet/forward.hpp"
#include "dmet/hall.hpp"
#include "dmet/io/config.hpp"
#include "dmet/io/pgm.hpp"
#include "dmet/io/pipeline.hpp"
#include "dmet/io/report.hpp"
#include "dmet/io/scan_io.hpp"
#include "dmet/io/spectrum_io.hpp"
#include "dmet/io/transport_io.hpp"
#include "dmet/layout.hpp"
#include "dmet/wl.hpp"

using namespace dmet;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per call, under the system temp root.
fs::path scratch_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() /
                 ("dmet_io_" + tag + "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("spectrum text parsing") {
  Spectrum s = parse_spectrum_text(
      "# comment line\n"
      "\n"
      "0.005, 3\n"
      "0.015  1\n"
      "0.025, 0\n",
      "inline");
  REQUIRE(s.counts.size() == 3);
  CHECK(s.counts[0] == 3.0);
  CHECK(s.counts[1] == 1.0);
  CHECK(s.counts[2] == 0.0);
  // Edges rebuilt from the uniform centers.
  CHECK(s.bin_edges_keV[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(s.bin_edges_keV[1] == doctest::Approx(0.01).epsilon(1e-12));
  CHECK(s.bin_edges_keV[3] == doctest::Approx(0.03).epsilon(1e-12));

  CHECK_THROWS_AS(parse_spectrum_text("0.005 -1\n0.015 2\n", "inline"), ParseError);
  CHECK_THROWS_AS(parse_spectrum_text("0.005 1 9\n0.015 2\n", "inline"), ParseError);
  CHECK_THROWS_AS(parse_spectrum_text("0.015 1\n0.005 2\n", "inline"), ParseError);
  CHECK_THROWS_AS(parse_spectrum_text("0.005 1\n0.015 2\n0.060 1\n", "inline"),
                  ParseError);
  CHECK_THROWS_AS(parse_spectrum_text("0.005 1\n", "inline"), InsufficientDataError);
  CHECK_THROWS_AS(parse_spectrum_text("# only comments\n", "inline"),
                  InsufficientDataError);
}

TEST_CASE("spectrum file round trip") {
  fs::path dir = scratch_dir("spectrum");
  DetectorConfig det;
  Spectrum s = Spectrum::zeros(det);
  s.counts[100] = 41.0;
  s.counts[2047] = 7.25;

  std::string path = (dir / "spec.csv").string();
  write_spectrum_file(path, s, {"fixture spectrum"});
  Spectrum back = parse_spectrum_file(path);

  REQUIRE(back.counts.size() == s.counts.size());
  for (std::size_t i = 0; i < s.counts.size(); ++i)
    CHECK(back.counts[i] == s.counts[i]);
  for (std::size_t i = 0; i < s.bin_edges_keV.size(); ++i)
    CHECK(back.bin_edges_keV[i] == doctest::Approx(s.bin_edges_keV[i]).epsilon(1e-12));

  // The comment landed in the header.
  CHECK(read_text_file(path).find("# fixture spectrum") != std::string::npos);
  CHECK_THROWS_AS(parse_spectrum_file((dir / "absent.csv").string()), ParseError);
}

TEST_CASE("transport file round trips") {
  fs::path dir = scratch_dir("transport");

  MagnetoTrace perp;
  perp.orientation = Orientation::perpendicular;
  perp.temperature_K = 1.8;
  for (int i = 0; i < 6; ++i) {
    perp.field_T.push_back(0.1 * (i + 1));
    perp.value.push_back(1e-6 * i);
    perp.error.push_back(1e-8 * (i + 1));
  }
  std::string perp_path = (dir / "perp.dat").string();
  write_transport_file(perp_path, perp, {"perpendicular sweep"});
  MagnetoTrace perp_back = parse_transport_file(perp_path);
  CHECK(perp_back.orientation == Orientation::perpendicular);
  CHECK(perp_back.quantity == TraceQuantity::delta_sigma);
  CHECK(perp_back.temperature_K == doctest::Approx(1.8));
  REQUIRE(perp_back.size() == perp.size());
  for (std::size_t i = 0; i < perp.size(); ++i) {
    CHECK(perp_back.field_T[i] == doctest::Approx(perp.field_T[i]).epsilon(1e-14));
    CHECK(perp_back.value[i] == doctest::Approx(perp.value[i]).epsilon(1e-14));
    CHECK(perp_back.error[i] == doctest::Approx(perp.error[i]).epsilon(1e-14));
  }

  MagnetoTrace rxy;
  rxy.orientation = Orientation::perpendicular;
  rxy.quantity = TraceQuantity::r_xy;
  for (int i = 0; i < 5; ++i) {
    rxy.field_T.push_back(-2.0 + i);
    rxy.value.push_back(4.76 * (-2.0 + i));
  }
  std::string rxy_path = (dir / "rxy.dat").string();
  write_transport_file(rxy_path, rxy);
  MagnetoTrace rxy_back = parse_transport_file(rxy_path);
  CHECK(rxy_back.quantity == TraceQuantity::r_xy);
  CHECK(rxy_back.error.empty());
  CHECK(rxy_back.value[0] == doctest::Approx(rxy.value[0]).epsilon(1e-14));

  // Angle sweep at fixed |B| (sweep=angle form).
  MagnetoTrace tilt;
  tilt.orientation = Orientation::tilt;
  for (int i = 0; i < 7; ++i) {
    tilt.angle_deg.push_back(15.0 * i);
    tilt.field_T.push_back(1.0);
    tilt.value.push_back(1e-6 + 1e-7 * i);
  }
  std::string tilt_path = (dir / "tilt.dat").string();
  write_transport_file(tilt_path, tilt);
  MagnetoTrace tilt_back = parse_transport_file(tilt_path);
  CHECK(tilt_back.orientation == Orientation::tilt);
  REQUIRE(tilt_back.angle_deg.size() == 7);
  for (std::size_t i = 0; i < tilt.size(); ++i) {
    CHECK(tilt_back.angle_deg[i] == doctest::Approx(tilt.angle_deg[i]).epsilon(1e-14));
    CHECK(tilt_back.field_T[i] == doctest::Approx(1.0).epsilon(1e-14));
  }

  // Field sweep at fixed angle (angle= form).
  MagnetoTrace fixed_angle;
  fixed_angle.orientation = Orientation::tilt;
  for (int i = 0; i < 5; ++i) {
    fixed_angle.angle_deg.push_back(30.0);
    fixed_angle.field_T.push_back(0.5 * (i + 1));
    fixed_angle.value.push_back(2e-6 * i);
  }
  std::string fixed_path = (dir / "tilt_fixed.dat").string();
  write_transport_file(fixed_path, fixed_angle);
  CHECK(read_text_file(fixed_path).find("angle=30") != std::string::npos);
  MagnetoTrace fixed_back = parse_transport_file(fixed_path);
  REQUIRE(fixed_back.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(fixed_back.angle_deg[i] == doctest::Approx(30.0));
    CHECK(fixed_back.field_T[i] == doctest::Approx(0.5 * (i + 1)).epsilon(1e-14));
  }
}

TEST_CASE("transport parse errors") {
  CHECK_THROWS_AS(parse_transport_text("0.1 1e-6\n0.2 2e-6\n0.3 3e-6\n"
                                       "0.4 4e-6\n0.5 5e-6\n",
                                       "inline"),
                  ParseError);  // orientation missing
  CHECK_THROWS_AS(parse_transport_text("orientation=perpendicular\n"
                                       "0.1 1e-6\n0.2 bad\n0.3 3e-6\n"
                                       "0.4 4e-6\n0.5 5e-6\n",
                                       "inline"),
                  ParseError);
  CHECK_THROWS_AS(parse_transport_text("orientation=perpendicular\n"
                                       "0.1 1e-6\n0.2 2e-6\n",
                                       "inline"),
                  InsufficientDataError);
  CHECK_THROWS_AS(parse_transport_text("orientation=sideways\n0.1 1\n0.2 1\n"
                                       "0.3 1\n0.4 1\n0.5 1\n",
                                       "inline"),
                  ParseError);
}

TEST_CASE("scan containers round trip in both formats") {
  fs::path dir = scratch_dir("scan");
  BeamConfig beam;
  beam.flux_photons_per_s = 1e9;
  DetectorConfig det;
  ScanGrid grid = simulate_scan(demo_device_layout(1), beam, det, 4, 3, 0.5, 0.5,
                                91, 40.0, 20.0, builtin_element_table(), 2);

  for (ScanFormat format : {ScanFormat::csv, ScanFormat::packed}) {
    std::string path =
        (dir / (format == ScanFormat::csv ? "scan_csv" : "scan.bin")).string();
    write_scan(path, grid, format);
    ScanGrid back = read_scan(path);
    CHECK(back.nx == grid.nx);
    CHECK(back.ny == grid.ny);
    CHECK(back.pitch_x_um == grid.pitch_x_um);
    CHECK(back.pitch_y_um == grid.pitch_y_um);
    CHECK(back.origin_x_um == grid.origin_x_um);
    CHECK(back.origin_y_um == grid.origin_y_um);
    CHECK(back.seed == grid.seed);
    CHECK(back.beam.photon_energy_keV == grid.beam.photon_energy_keV);
    CHECK(back.beam.dwell_s == grid.beam.dwell_s);
    CHECK(back.detector.energy_bins == grid.detector.energy_bins);
    REQUIRE(back.pixels.size() == grid.pixels.size());
    for (std::size_t p = 0; p < grid.pixels.size(); ++p) {
      for (std::size_t i = 0; i < grid.pixels[p].counts.size(); ++i)
        CHECK(back.pixels[p].counts[i] == grid.pixels[p].counts[i]);
      CHECK(back.pixels[p].bin_edges_keV.front() == grid.pixels[p].bin_edges_keV.front());
      CHECK(back.pixels[p].bin_edges_keV.back() ==
            doctest::Approx(grid.pixels[p].bin_edges_keV.back()).epsilon(1e-12));
    }
  }

  CHECK(parse_scan_format("csv") == ScanFormat::csv);
  CHECK(parse_scan_format("packed") == ScanFormat::packed);
  CHECK_THROWS_AS(parse_scan_format("tar"), ConfigError);

  // Corrupt the packed magic.
  std::string packed = (dir / "scan.bin").string();
  {
    std::fstream f(packed, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.write("XXXXXXXX", 8);
  }
  CHECK_THROWS_AS(read_scan(packed), ParseError);
  CHECK_THROWS_AS(read_scan((dir / "no_such_container").string()), ParseError);
}

TEST_CASE("pgm16 round trip and scaling") {
  fs::path dir = scratch_dir("pgm");
  std::string path = (dir / "map.pgm").string();
  std::vector<double> values = {0.0, 0.25, 0.5, 1.0, 2.0, -1.0};
  write_pgm16(path, 3, 2, values, 0.0, 1.0, {"range note"});
  Pgm16 img = read_pgm16(path);
  CHECK(img.nx == 3);
  CHECK(img.ny == 2);
  REQUIRE(img.pixels.size() == 6);
  CHECK(img.pixels[0] == 0);
  CHECK(img.pixels[1] == 16384);  // 0.25 * 65535 rounded
  CHECK(img.pixels[2] == 32768);
  CHECK(img.pixels[3] == 65535);
  CHECK(img.pixels[4] == 65535);  // clamped above
  CHECK(img.pixels[5] == 0);      // clamped below
  CHECK(read_text_file(path).find("# range note") != std::string::npos);

  // Auto-ranged overload spans the finite extremes.
  std::string auto_path = (dir / "auto.pgm").string();
  write_pgm16(auto_path, 2, 1, {3.0, 7.0});
  Pgm16 auto_img = read_pgm16(auto_path);
  CHECK(auto_img.pixels[0] == 0);
  CHECK(auto_img.pixels[1] == 65535);

  write_text_file((dir / "bad.pgm").string(), "P2\n1 1\n255\n0\n");
  CHECK_THROWS_AS(read_pgm16((dir / "bad.pgm").string()), ParseError);
  CHECK_THROWS_AS(read_pgm16((dir / "absent.pgm").string()), ParseError);
}

TEST_CASE("run config loading tracks defaults and rejects junk") {
  fs::path dir = scratch_dir("config");

  RunConfig defaults = default_run_config();
  CHECK(defaults.seed == 1);
  CHECK(defaults.element == "As");
  // Every key is reported as defaulted.
  CHECK(std::find(defaults.defaulted.begin(), defaults.defaulted.end(), "seed") !=
        defaults.defaulted.end());
  CHECK(std::find(defaults.defaulted.begin(), defaults.defaulted.end(), "nx") !=
        defaults.defaulted.end());

  // A partial config keeps explicit keys out of `defaulted`.
  std::string cfg_path = (dir / "run.json").string();
  write_text_file(cfg_path,
                  "{\n"
                  "  \"seed\": 7,\n"
                  "  \"nx\": 10,\n"
                  "  \"element\": \"Fe\",\n"
                  "  \"beam\": {\"flux_photons_per_s\": 1e9},\n"
                  "  \"snr_on\": {\"axis\": \"y\", \"index\": 3}\n"
                  "}\n");
  RunConfig cfg = load_run_config(cfg_path);
  CHECK(cfg.seed == 7);
  CHECK(cfg.nx == 10);
  CHECK(cfg.element == "Fe");
  CHECK(cfg.beam.flux_photons_per_s == 1e9);
  CHECK(cfg.beam.photon_energy_keV == 11.88);  // untouched default
  CHECK(cfg.snr_on.axis == "y");
  CHECK(cfg.snr_on.index == 3);
  CHECK(std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "seed") ==
        cfg.defaulted.end());
  CHECK(std::find(cfg.defaulted.begin(), cfg.defaulted.end(), "ny") !=
        cfg.defaulted.end());

  write_text_file((dir / "unknown.json").string(), "{\"sedd\": 1}\n");
  CHECK_THROWS_AS(load_run_config((dir / "unknown.json").string()), ConfigError);

  write_text_file((dir / "missing_ref.json").string(),
                  "{\"spectrum_path\": \"" + (dir / "ghost.csv").string() + "\"}\n");
  CHECK_THROWS_AS(load_run_config((dir / "missing_ref.json").string()), ConfigError);

  write_text_file((dir / "broken.json").string(), "{\"seed\": \n");
  CHECK_THROWS_AS(load_run_config((dir / "broken.json").string()), ParseError);
  CHECK_THROWS_AS(load_run_config((dir / "absent.json").string()), ParseError);
}

TEST_CASE("layout, element table, and run summary round trips") {
  fs::path dir = scratch_dir("roundtrip");

  DeviceLayout layout = demo_device_layout(2);
  std::string layout_path = (dir / "layout.json").string();
  write_device_layout(layout_path, layout);
  DeviceLayout back = load_device_layout(layout_path);
  CHECK(back.x0_um == layout.x0_um);
  CHECK(back.x1_um == layout.x1_um);
  CHECK(back.y1_um == layout.y1_um);
  REQUIRE(back.regions.size() == layout.regions.size());
  CHECK(back.background_per_cm2 == layout.background_per_cm2);
  CHECK(back.scatter.elastic_counts_per_photon == layout.scatter.elastic_counts_per_photon);
  CHECK(back.scatter.compton_counts_per_photon == layout.scatter.compton_counts_per_photon);
  CHECK(back.continuum.coeffs == layout.continuum.coeffs);
  for (std::size_t i = 0; i < layout.regions.size(); ++i) {
    CHECK(back.regions[i].element == layout.regions[i].element);
    CHECK(back.regions[i].density_per_cm2 == layout.regions[i].density_per_cm2);
    REQUIRE(back.regions[i].polygon.vertices_um.size() == layout.regions[i].polygon.vertices_um.size());
  }

  const std::vector<ElementTemplate>& table = builtin_element_table();
  std::string table_path = (dir / "elements.json").string();
  write_element_table(table_path, table);
  std::vector<ElementTemplate> table_back = load_element_table(table_path);
  REQUIRE(table_back.size() == table.size());
  for (std::size_t i = 0; i < table.size(); ++i) {
    CHECK(table_back[i].symbol == table[i].symbol);
    CHECK(table_back[i].sensitivity_cm2 == table[i].sensitivity_cm2);
    REQUIRE(table_back[i].lines.size() == table[i].lines.size());
    for (std::size_t k = 0; k < table[i].lines.size(); ++k) {
      CHECK(table_back[i].lines[k].energy_keV == table[i].lines[k].energy_keV);
      CHECK(table_back[i].lines[k].relative_intensity ==
            table[i].lines[k].relative_intensity);
      CHECK(table_back[i].lines[k].edge_energy_keV == table[i].lines[k].edge_energy_keV);
      CHECK(table_back[i].lines[k].transmission == table[i].lines[k].transmission);
    }
  }
  CHECK(load_element_table("builtin").size() == table.size());

  RunSummary run;
  run.label = "fixture";
  run.n_per_cm2 = Measured{1.31e14, 3e12};
  run.t_nm = Measured{0.98, 0.02};
  // mu, L, Lphi, gamma, p left unset on purpose.
  std::string run_path = (dir / "run.json").string();
  write_run_summary(run_path, run);
  RunSummary run_back = load_run_summary(run_path);
  CHECK(run_back.label == "fixture");
  REQUIRE(run_back.n_per_cm2.has_value());
  CHECK(run_back.n_per_cm2->value == 1.31e14);
  CHECK(run_back.n_per_cm2->error == 3e12);
  REQUIRE(run_back.t_nm.has_value());
  CHECK(run_back.t_nm->value == 0.98);
  CHECK_FALSE(run_back.mu_cm2_Vs.has_value());
  CHECK_FALSE(run_back.gamma_per_T2.has_value());
}

TEST_CASE("demo specs resolve and unknown specs fail") {
  CHECK(demo_device_layout(1).contains(50.0, 25.0));
  CHECK(load_device_layout("demo:1").regions.size() ==
        demo_device_layout(1).regions.size());
  CHECK(load_device_layout("demo:2").regions.size() ==
        demo_device_layout(2).regions.size());
  CHECK(load_device_layout("demo-reference:1").regions.size() == 1);
  CHECK(load_device_layout("demo-reference:2").regions.size() == 1);
  CHECK_THROWS_AS(load_device_layout("demo:3"), ConfigError);
  // Anything that is not a demo tag is treated as a path.
  CHECK_THROWS_AS(load_device_layout("nonsense-spec"), ParseError);

  CHECK(load_run_summary("demo:before").label == "before exposure");
  CHECK(load_run_summary("demo:after").label == "after exposure");
  CHECK_THROWS_AS(load_run_summary("demo:never"), ConfigError);
  CHECK_THROWS_AS(load_element_table("no-such-table.json"), ParseError);
}

TEST_CASE("measured json round trip") {
  Measured m{3.5, 0.25};
  OrderedJson j = measured_json(m);
  CHECK(j["value"] == 3.5);
  CHECK(j["error"] == 0.25);
  Measured back = measured_from_json(j);
  CHECK(back.value == m.value);
  CHECK(back.error == m.error);
}

TEST_CASE("pipeline reports are deterministic and carry exit codes") {
  fs::path dir = scratch_dir("pipeline");

  RunConfig cfg = default_run_config();
  cfg.output_dir = (dir / "out_a").string();
  cfg.Lphi_nm = {73.6, 0.4};
  cfg.L_nm = {4.8, 0.1};
  cfg.n_per_cm2 = {1.31e14, 3e12};
  cfg.gamma_per_T2 = {0.0077482619044548921, 0.0005};
  PipelineResult a = run_pipeline(cfg, "thickness");
  CHECK(a.exit_code == 0);
  REQUIRE(!a.written.empty());
  CHECK(fs::exists(a.written.back()));

  cfg.output_dir = (dir / "out_b").string();
  PipelineResult b = run_pipeline(cfg, "thickness");
  CHECK(render_json(a.report) == render_json(b.report));
  CHECK(a.report["subcommand"] == "thickness");
  REQUIRE(a.report.contains("t_nm"));
  CHECK(measured_from_json(a.report["t_nm"]).value == doctest::Approx(0.98).epsilon(1e-9));

  // compare subcommand on the built-in before/after states.
  cfg.output_dir = (dir / "out_cmp").string();
  PipelineResult cmp = run_pipeline(cfg, "compare");
  CHECK(cmp.exit_code == 0);
  CHECK(cmp.report["all_consistent"] == true);
  CHECK(cmp.report["before"] == "before exposure");

  // A config error lands in the report, not as an exception.
  RunConfig bad = default_run_config();
  bad.output_dir = (dir / "out_bad").string();
  bad.spectrum_path = "";  // fit-spectrum requires a spectrum
  PipelineResult err = run_pipeline(bad, "fit-spectrum");
  CHECK(err.exit_code == static_cast<int>(ExitCode::config));
  CHECK(err.report["error"]["exit_code"] == 5);
  CHECK(err.report["error"]["class"] == "config");

  PipelineResult unknown = run_pipeline(bad, "frobnicate");
  CHECK(unknown.exit_code == static_cast<int>(ExitCode::config));

  // Exit codes mirror the exception hierarchy.
  CHECK(ParseError("x").exit_code() == ExitCode::parse);
  CHECK(InsufficientDataError("x").exit_code() == ExitCode::parse);
  CHECK(FitError("x").exit_code() == ExitCode::fit);
  CHECK(DegeneracyError("x").exit_code() == ExitCode::fit);
  CHECK(CalibrationError("x").exit_code() == ExitCode::calibration);
  CHECK(ConfigError("x").exit_code() == ExitCode::config);
  CHECK(DomainError("x").exit_code() == ExitCode::config);
  CHECK(RangeError("x").exit_code() == ExitCode::config);
}
