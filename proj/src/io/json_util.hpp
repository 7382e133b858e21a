#pragma once

// Internal JSON helpers shared by the config, scan-container and report code.

#include <string>
#include <vector>

#include <json.hpp>

#include "dmet/errors.hpp"
#include "dmet/io/report.hpp"
#include "dmet/types.hpp"

namespace dmet::jsonio {

using Json = dmet::OrderedJson;

inline Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw dmet::ParseError(origin + ": " + e.what());
  }
}

inline void check_allowed_keys(const Json& obj, const std::vector<std::string>& allowed,
                               const std::string& context) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const auto& k : allowed) known = known || k == item.key();
    if (!known)
      throw dmet::ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

// Field reader over one JSON object. In strict mode a missing key throws; in
// default mode it falls back and records "<prefix><key>" in `defaulted`.
class Fields {
 public:
  Fields(const Json* obj, std::string prefix, std::vector<std::string>* defaulted)
      : obj_(obj), prefix_(std::move(prefix)), defaulted_(defaulted) {}

  bool has(const char* key) const { return obj_ && obj_->contains(key); }

  template <typename T>
  T get(const char* key, T fallback) {
    if (!has(key)) {
      if (defaulted_) defaulted_->push_back(prefix_ + key);
      return fallback;
    }
    try {
      return obj_->at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw dmet::ConfigError(prefix_ + key + ": " + e.what());
    }
  }

  dmet::Measured measured(const char* key, dmet::Measured fallback) {
    if (!has(key)) {
      if (defaulted_) defaulted_->push_back(prefix_ + key);
      return fallback;
    }
    const Json& j = obj_->at(key);
    check_allowed_keys(j, {"value", "error"}, prefix_ + key);
    dmet::Measured out = fallback;
    out.value = j.contains("value") ? j.at("value").get<double>() : 0.0;
    out.error = j.contains("error") ? j.at("error").get<double>() : 0.0;
    return out;
  }

  const Json* child(const char* key) const {
    return has(key) ? &obj_->at(key) : nullptr;
  }

 private:
  const Json* obj_;
  std::string prefix_;
  std::vector<std::string>* defaulted_;
};

inline Json beam_to_json(const dmet::BeamConfig& beam) {
  Json j;
  j["photon_energy_keV"] = beam.photon_energy_keV;
  j["flux_photons_per_s"] = beam.flux_photons_per_s;
  j["spot_width_um"] = beam.spot_width_um;
  j["spot_height_um"] = beam.spot_height_um;
  j["energy_resolution"] = beam.energy_resolution;
  j["dwell_s"] = beam.dwell_s;
  return j;
}

inline dmet::BeamConfig beam_from_json(const Json* obj, const std::string& prefix,
                                       std::vector<std::string>* defaulted) {
  dmet::BeamConfig beam;
  if (obj)
    check_allowed_keys(*obj, {"photon_energy_keV", "flux_photons_per_s", "spot_width_um",
                              "spot_height_um", "energy_resolution", "dwell_s"},
                       prefix.empty() ? "beam" : prefix);
  Fields f(obj, prefix, defaulted);
  beam.photon_energy_keV = f.get("photon_energy_keV", beam.photon_energy_keV);
  beam.flux_photons_per_s = f.get("flux_photons_per_s", beam.flux_photons_per_s);
  beam.spot_width_um = f.get("spot_width_um", beam.spot_width_um);
  beam.spot_height_um = f.get("spot_height_um", beam.spot_height_um);
  beam.energy_resolution = f.get("energy_resolution", beam.energy_resolution);
  beam.dwell_s = f.get("dwell_s", beam.dwell_s);
  beam.validate();
  return beam;
}

inline Json detector_to_json(const dmet::DetectorConfig& det) {
  Json j;
  j["distance_cm"] = det.distance_cm;
  j["active_area_mm2"] = det.active_area_mm2;
  j["energy_bins"] = det.energy_bins;
  j["bin_width_keV"] = det.bin_width_keV;
  j["first_edge_keV"] = det.first_edge_keV;
  j["noise_fwhm_keV"] = det.noise_fwhm_keV;
  j["fano_factor"] = det.fano_factor;
  j["pair_energy_keV"] = det.pair_energy_keV;
  return j;
}

inline dmet::DetectorConfig detector_from_json(const Json* obj, const std::string& prefix,
                                               std::vector<std::string>* defaulted) {
  dmet::DetectorConfig det;
  if (obj)
    check_allowed_keys(*obj, {"distance_cm", "active_area_mm2", "energy_bins",
                              "bin_width_keV", "first_edge_keV", "noise_fwhm_keV",
                              "fano_factor", "pair_energy_keV"},
                       prefix.empty() ? "detector" : prefix);
  Fields f(obj, prefix, defaulted);
  det.distance_cm = f.get("distance_cm", det.distance_cm);
  det.active_area_mm2 = f.get("active_area_mm2", det.active_area_mm2);
  det.energy_bins = f.get("energy_bins", det.energy_bins);
  det.bin_width_keV = f.get("bin_width_keV", det.bin_width_keV);
  det.first_edge_keV = f.get("first_edge_keV", det.first_edge_keV);
  det.noise_fwhm_keV = f.get("noise_fwhm_keV", det.noise_fwhm_keV);
  det.fano_factor = f.get("fano_factor", det.fano_factor);
  det.pair_energy_keV = f.get("pair_energy_keV", det.pair_energy_keV);
  det.validate();
  return det;
}

}  // namespace dmet::jsonio
