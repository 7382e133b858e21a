#include "dmet/io/config.hpp"

#include <filesystem>
#include <optional>

#include "dmet/demo.hpp"
#include "dmet/errors.hpp"
#include "dmet/io/report.hpp"
#include "dmet/io/scan_io.hpp"
#include "json_util.hpp"

namespace dmet {

namespace fs = std::filesystem;
using jsonio::Json;

namespace {

bool is_layout_fixture(const std::string& spec) {
  return spec.rfind("demo:", 0) == 0 || spec.rfind("demo-reference:", 0) == 0;
}

bool is_summary_fixture(const std::string& spec) { return spec.rfind("demo:", 0) == 0; }

void require_file(const std::string& key, const std::string& path) {
  if (!path.empty() && !fs::exists(path))
    throw ConfigError(key + ": file '" + path + "' does not exist");
}

TraceWindow trace_window_from_json(const Json* obj, const std::string& prefix,
                                   std::vector<std::string>* defaulted) {
  TraceWindow w;
  if (obj)
    jsonio::check_allowed_keys(*obj, {"axis", "index", "start_um", "length_um"},
                               prefix.empty() ? "trace window" : prefix);
  jsonio::Fields f(obj, prefix, defaulted);
  w.axis = f.get<std::string>("axis", w.axis);
  w.index = f.get("index", w.index);
  w.start_um = f.get("start_um", w.start_um);
  w.length_um = f.get("length_um", w.length_um);
  if (w.axis != "x" && w.axis != "y")
    throw ConfigError(prefix + "axis: expected x or y, got '" + w.axis + "'");
  if (w.index < 0) throw ConfigError(prefix + "index must be >= 0");
  if (w.length_um <= 0.0) throw ConfigError(prefix + "length_um must be > 0");
  return w;
}

AnalysisOptions analysis_from_json(const Json* obj, const std::string& prefix,
                                   std::vector<std::string>* defaulted) {
  AnalysisOptions a;
  if (obj)
    jsonio::check_allowed_keys(
        *obj, {"background_order", "weighting", "include_elastic", "include_compton"},
        "analysis");
  jsonio::Fields f(obj, prefix, defaulted);
  a.background_order = f.get("background_order", a.background_order);
  a.weighting = parse_weighting(f.get<std::string>("weighting", weighting_tag(a.weighting)));
  a.include_elastic = f.get("include_elastic", a.include_elastic);
  a.include_compton = f.get("include_compton", a.include_compton);
  if (a.background_order < 0)
    throw ConfigError("analysis.background_order must be >= 0");
  return a;
}

FitOptions fit_from_json(const Json* obj, const std::string& prefix,
                         std::vector<std::string>* defaulted) {
  FitOptions o;
  if (obj)
    jsonio::check_allowed_keys(*obj,
                               {"L_start_min_nm", "L_start_max_nm", "Lphi_start_min_nm",
                                "Lphi_start_max_nm", "starts_per_axis",
                                "relative_tolerance", "max_iterations"},
                               "fit");
  jsonio::Fields f(obj, prefix, defaulted);
  o.L_start_min_nm = f.get("L_start_min_nm", o.L_start_min_nm);
  o.L_start_max_nm = f.get("L_start_max_nm", o.L_start_max_nm);
  o.Lphi_start_min_nm = f.get("Lphi_start_min_nm", o.Lphi_start_min_nm);
  o.Lphi_start_max_nm = f.get("Lphi_start_max_nm", o.Lphi_start_max_nm);
  o.starts_per_axis = f.get("starts_per_axis", o.starts_per_axis);
  o.relative_tolerance = f.get("relative_tolerance", o.relative_tolerance);
  o.max_iterations = f.get("max_iterations", o.max_iterations);
  o.validate();
  return o;
}

RunConfig config_from_json(const Json& j, const std::string& origin) {
  jsonio::check_allowed_keys(
      j,
      {"seed", "output_dir", "threads", "format", "beam", "detector", "layout",
       "element_table", "analysis", "fit", "nx", "ny", "pitch_x_um", "pitch_y_um",
       "origin_x_um", "origin_y_um", "element", "spectrum_path", "scan_path",
       "reference_scan_path", "reference_density_per_cm2", "perpendicular_path",
       "parallel_path", "tilt_path", "hall_path", "sigma_sheet_S", "Lphi_nm", "L_nm",
       "n_per_cm2", "gamma_per_T2", "snr_on", "snr_off", "before", "after", "k_sigma",
       "device"},
      origin);

  RunConfig cfg;
  jsonio::Fields f(&j, "", &cfg.defaulted);
  cfg.seed = f.get("seed", cfg.seed);
  cfg.output_dir = f.get<std::string>("output_dir", cfg.output_dir);
  cfg.threads = f.get("threads", cfg.threads);
  cfg.format = f.get<std::string>("format", cfg.format);
  parse_scan_format(cfg.format);

  cfg.beam = jsonio::beam_from_json(f.child("beam"), "beam.", &cfg.defaulted);
  cfg.detector =
      jsonio::detector_from_json(f.child("detector"), "detector.", &cfg.defaulted);
  cfg.layout = f.get<std::string>("layout", cfg.layout);
  cfg.element_table = f.get<std::string>("element_table", cfg.element_table);
  cfg.analysis = analysis_from_json(f.child("analysis"), "analysis.", &cfg.defaulted);
  cfg.fit = fit_from_json(f.child("fit"), "fit.", &cfg.defaulted);

  cfg.nx = f.get("nx", cfg.nx);
  cfg.ny = f.get("ny", cfg.ny);
  cfg.pitch_x_um = f.get("pitch_x_um", cfg.pitch_x_um);
  cfg.pitch_y_um = f.get("pitch_y_um", cfg.pitch_y_um);
  cfg.origin_x_um = f.get("origin_x_um", cfg.origin_x_um);
  cfg.origin_y_um = f.get("origin_y_um", cfg.origin_y_um);
  if (cfg.nx < 1 || cfg.ny < 1) throw ConfigError("nx and ny must be >= 1");
  if (cfg.pitch_x_um <= 0.0 || cfg.pitch_y_um <= 0.0)
    throw ConfigError("pitch_x_um and pitch_y_um must be > 0");

  cfg.element = f.get<std::string>("element", cfg.element);
  if (cfg.element.empty()) throw ConfigError("element must not be empty");

  cfg.spectrum_path = f.get<std::string>("spectrum_path", cfg.spectrum_path);
  cfg.scan_path = f.get<std::string>("scan_path", cfg.scan_path);
  cfg.reference_scan_path =
      f.get<std::string>("reference_scan_path", cfg.reference_scan_path);
  cfg.reference_density_per_cm2 =
      f.measured("reference_density_per_cm2", cfg.reference_density_per_cm2);
  cfg.perpendicular_path =
      f.get<std::string>("perpendicular_path", cfg.perpendicular_path);
  cfg.parallel_path = f.get<std::string>("parallel_path", cfg.parallel_path);
  cfg.tilt_path = f.get<std::string>("tilt_path", cfg.tilt_path);
  cfg.hall_path = f.get<std::string>("hall_path", cfg.hall_path);
  cfg.sigma_sheet_S = f.measured("sigma_sheet_S", cfg.sigma_sheet_S);

  cfg.Lphi_nm = f.measured("Lphi_nm", cfg.Lphi_nm);
  cfg.L_nm = f.measured("L_nm", cfg.L_nm);
  cfg.n_per_cm2 = f.measured("n_per_cm2", cfg.n_per_cm2);
  cfg.gamma_per_T2 = f.measured("gamma_per_T2", cfg.gamma_per_T2);

  cfg.snr_on = trace_window_from_json(f.child("snr_on"), "snr_on.", &cfg.defaulted);
  cfg.snr_off = trace_window_from_json(f.child("snr_off"), "snr_off.", &cfg.defaulted);

  cfg.before = f.get<std::string>("before", cfg.before);
  cfg.after = f.get<std::string>("after", cfg.after);
  cfg.k_sigma = f.get("k_sigma", cfg.k_sigma);
  if (cfg.k_sigma <= 0.0) throw ConfigError("k_sigma must be > 0");

  cfg.device = f.get("device", cfg.device);
  if (cfg.device != 1 && cfg.device != 2)
    throw ConfigError("device must be 1 or 2, got " + std::to_string(cfg.device));

  for (const auto& [key, path] :
       std::initializer_list<std::pair<const char*, const std::string*>>{
           {"spectrum_path", &cfg.spectrum_path},
           {"scan_path", &cfg.scan_path},
           {"reference_scan_path", &cfg.reference_scan_path},
           {"perpendicular_path", &cfg.perpendicular_path},
           {"parallel_path", &cfg.parallel_path},
           {"tilt_path", &cfg.tilt_path},
           {"hall_path", &cfg.hall_path}})
    require_file(key, *path);
  if (!is_layout_fixture(cfg.layout)) require_file("layout", cfg.layout);
  if (cfg.element_table != "builtin") require_file("element_table", cfg.element_table);
  if (!is_summary_fixture(cfg.before)) require_file("before", cfg.before);
  if (!is_summary_fixture(cfg.after)) require_file("after", cfg.after);

  return cfg;
}

std::optional<Measured> optional_measured(jsonio::Fields& f, const char* key) {
  if (!f.has(key)) return std::nullopt;
  return f.measured(key, Measured{0.0, 0.0});
}

void put_optional(Json& j, const char* key, const std::optional<Measured>& v) {
  if (v) j[key] = measured_json(*v);
}

}  // namespace

RunConfig load_run_config(const std::string& path) {
  Json j = jsonio::parse_json_text(read_text_file(path), path);
  return config_from_json(j, path);
}

RunConfig default_run_config() {
  return config_from_json(Json::object(), "default config");
}

DeviceLayout load_device_layout(const std::string& spec) {
  if (spec == "demo:1") return demo_device_layout(1);
  if (spec == "demo:2") return demo_device_layout(2);
  if (spec == "demo-reference:1") return demo_reference_layout(1);
  if (spec == "demo-reference:2") return demo_reference_layout(2);
  if (is_layout_fixture(spec))
    throw ConfigError("unknown demo layout '" + spec +
                      "' (expected demo:1, demo:2, demo-reference:1, demo-reference:2)");

  Json j = jsonio::parse_json_text(read_text_file(spec), spec);
  jsonio::check_allowed_keys(
      j, {"bounds_um", "regions", "background_per_cm2", "scatter", "continuum_coeffs"},
      spec);
  DeviceLayout layout;
  try {
    const Json& bounds = j.at("bounds_um");
    if (!bounds.is_array() || bounds.size() != 4)
      throw ConfigError(spec + ": bounds_um must be [x0, y0, x1, y1]");
    layout.x0_um = bounds.at(0).get<double>();
    layout.y0_um = bounds.at(1).get<double>();
    layout.x1_um = bounds.at(2).get<double>();
    layout.y1_um = bounds.at(3).get<double>();

    for (const Json& r : j.value("regions", Json::array())) {
      jsonio::check_allowed_keys(r, {"element", "density_per_cm2", "polygon_um"},
                                 spec + ": region");
      LayoutRegion region;
      region.element = r.at("element").get<std::string>();
      region.density_per_cm2 = r.at("density_per_cm2").get<double>();
      for (const Json& v : r.at("polygon_um"))
        region.polygon.vertices_um.push_back(
            {v.at(0).get<double>(), v.at(1).get<double>()});
      layout.regions.push_back(std::move(region));
    }
    if (j.contains("background_per_cm2"))
      for (const auto& item : j.at("background_per_cm2").items())
        layout.background_per_cm2[item.key()] = item.value().get<double>();
    if (j.contains("scatter")) {
      const Json& s = j.at("scatter");
      jsonio::check_allowed_keys(
          s, {"elastic_counts_per_photon", "compton_counts_per_photon", "angle_deg"},
          spec + ": scatter");
      jsonio::Fields fs_(&s, "scatter.", nullptr);
      layout.scatter.elastic_counts_per_photon =
          fs_.get("elastic_counts_per_photon", 0.0);
      layout.scatter.compton_counts_per_photon =
          fs_.get("compton_counts_per_photon", 0.0);
      layout.scatter.angle_deg = fs_.get("angle_deg", 90.0);
    }
    if (j.contains("continuum_coeffs"))
      layout.continuum.coeffs = j.at("continuum_coeffs").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(spec + ": " + e.what());
  }
  layout.validate();
  return layout;
}

void write_device_layout(const std::string& path, const DeviceLayout& layout) {
  layout.validate();
  Json j;
  j["bounds_um"] = {layout.x0_um, layout.y0_um, layout.x1_um, layout.y1_um};
  j["regions"] = Json::array();
  for (const LayoutRegion& r : layout.regions) {
    Json rj;
    rj["element"] = r.element;
    rj["density_per_cm2"] = r.density_per_cm2;
    rj["polygon_um"] = Json::array();
    for (const auto& v : r.polygon.vertices_um) rj["polygon_um"].push_back({v[0], v[1]});
    j["regions"].push_back(std::move(rj));
  }
  j["background_per_cm2"] = Json::object();
  for (const auto& [symbol, density] : layout.background_per_cm2)
    j["background_per_cm2"][symbol] = density;
  j["scatter"] = {{"elastic_counts_per_photon", layout.scatter.elastic_counts_per_photon},
                  {"compton_counts_per_photon", layout.scatter.compton_counts_per_photon},
                  {"angle_deg", layout.scatter.angle_deg}};
  j["continuum_coeffs"] = layout.continuum.coeffs;
  write_text_file(path, render_json(j));
}

std::vector<ElementTemplate> load_element_table(const std::string& spec) {
  if (spec == "builtin") return builtin_element_table();

  Json j = jsonio::parse_json_text(read_text_file(spec), spec);
  jsonio::check_allowed_keys(j, {"elements"}, spec);
  std::vector<ElementTemplate> table;
  try {
    for (const Json& e : j.at("elements")) {
      jsonio::check_allowed_keys(
          e, {"symbol", "sensitivity_cm2", "mass_attenuation_cm2_g", "lines"},
          spec + ": element");
      ElementTemplate t;
      t.symbol = e.at("symbol").get<std::string>();
      t.sensitivity_cm2 = e.at("sensitivity_cm2").get<double>();
      t.mass_attenuation_cm2_g = e.value("mass_attenuation_cm2_g", 0.0);
      for (const Json& l : e.at("lines")) {
        jsonio::check_allowed_keys(l,
                                   {"label", "energy_keV", "relative_intensity",
                                    "edge_energy_keV", "transmission"},
                                   spec + ": line");
        EmissionLine line;
        line.label = l.at("label").get<std::string>();
        line.energy_keV = l.at("energy_keV").get<double>();
        line.relative_intensity = l.value("relative_intensity", 1.0);
        line.edge_energy_keV = l.at("edge_energy_keV").get<double>();
        line.transmission = l.value("transmission", 1.0);
        t.lines.push_back(std::move(line));
      }
      t.validate();
      table.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(spec + ": " + e.what());
  }
  if (table.empty()) throw ConfigError(spec + ": element table is empty");
  return table;
}

void write_element_table(const std::string& path,
                         const std::vector<ElementTemplate>& table) {
  Json j;
  j["elements"] = Json::array();
  for (const ElementTemplate& t : table) {
    t.validate();
    Json e;
    e["symbol"] = t.symbol;
    e["sensitivity_cm2"] = t.sensitivity_cm2;
    e["mass_attenuation_cm2_g"] = t.mass_attenuation_cm2_g;
    e["lines"] = Json::array();
    for (const EmissionLine& l : t.lines)
      e["lines"].push_back({{"label", l.label},
                            {"energy_keV", l.energy_keV},
                            {"relative_intensity", l.relative_intensity},
                            {"edge_energy_keV", l.edge_energy_keV},
                            {"transmission", l.transmission}});
    j["elements"].push_back(std::move(e));
  }
  write_text_file(path, render_json(j));
}

RunSummary load_run_summary(const std::string& spec) {
  if (spec == "demo:before") return demo_transport_before();
  if (spec == "demo:after") return demo_transport_after();
  if (is_summary_fixture(spec))
    throw ConfigError("unknown demo run summary '" + spec +
                      "' (expected demo:before or demo:after)");

  Json j = jsonio::parse_json_text(read_text_file(spec), spec);
  jsonio::check_allowed_keys(
      j, {"label", "n_per_cm2", "mu_cm2_Vs", "L_nm", "Lphi_nm", "gamma_per_T2", "p",
          "t_nm"},
      spec);
  jsonio::Fields f(&j, spec + ": ", nullptr);
  RunSummary run;
  run.label = f.get<std::string>("label", "");
  run.n_per_cm2 = optional_measured(f, "n_per_cm2");
  run.mu_cm2_Vs = optional_measured(f, "mu_cm2_Vs");
  run.L_nm = optional_measured(f, "L_nm");
  run.Lphi_nm = optional_measured(f, "Lphi_nm");
  run.gamma_per_T2 = optional_measured(f, "gamma_per_T2");
  run.p = optional_measured(f, "p");
  run.t_nm = optional_measured(f, "t_nm");
  return run;
}

void write_run_summary(const std::string& path, const RunSummary& run) {
  Json j;
  j["label"] = run.label;
  put_optional(j, "n_per_cm2", run.n_per_cm2);
  put_optional(j, "mu_cm2_Vs", run.mu_cm2_Vs);
  put_optional(j, "L_nm", run.L_nm);
  put_optional(j, "Lphi_nm", run.Lphi_nm);
  put_optional(j, "gamma_per_T2", run.gamma_per_T2);
  put_optional(j, "p", run.p);
  put_optional(j, "t_nm", run.t_nm);
  write_text_file(path, render_json(j));
}

}  // namespace dmet
