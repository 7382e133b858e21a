#include "dmet/io/scan_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "dmet/errors.hpp"
#include "dmet/io/report.hpp"
#include "dmet/io/spectrum_io.hpp"
#include "json_util.hpp"

namespace dmet {

namespace fs = std::filesystem;
using jsonio::Json;

namespace {

constexpr char kMagic[8] = {'D', 'M', 'S', 'C', '0', '0', '0', '1'};

std::string pixel_filename(int ix, int iy) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "px_%04d_%04d.csv", iy, ix);
  return buf;
}

void put_u32(std::ofstream& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::ofstream& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f64(std::ofstream& out, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(out, bits);
}

std::uint32_t get_u32(std::ifstream& in, const std::string& path) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    int c = in.get();
    if (c < 0) throw ParseError(path + ": truncated packed scan");
    v |= static_cast<std::uint32_t>(c) << (8 * i);
  }
  return v;
}

std::uint64_t get_u64(std::ifstream& in, const std::string& path) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    int c = in.get();
    if (c < 0) throw ParseError(path + ": truncated packed scan");
    v |= static_cast<std::uint64_t>(c) << (8 * i);
  }
  return v;
}

double get_f64(std::ifstream& in, const std::string& path) {
  std::uint64_t bits = get_u64(in, path);
  double v;
  std::memcpy(&v, &bits, 8);
  return v;
}

void write_scan_csv(const std::string& dir, const ScanGrid& grid) {
  fs::create_directories(dir);

  Json meta;
  meta["container"] = "dmet-scan";
  meta["version"] = 1;
  meta["nx"] = grid.nx;
  meta["ny"] = grid.ny;
  meta["pitch_x_um"] = grid.pitch_x_um;
  meta["pitch_y_um"] = grid.pitch_y_um;
  meta["origin_x_um"] = grid.origin_x_um;
  meta["origin_y_um"] = grid.origin_y_um;
  meta["seed"] = grid.seed;
  meta["beam"] = jsonio::beam_to_json(grid.beam);
  meta["detector"] = jsonio::detector_to_json(grid.detector);
  write_text_file((fs::path(dir) / "meta.json").string(), render_json(meta));

  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix)
      write_spectrum_file((fs::path(dir) / pixel_filename(ix, iy)).string(),
                          grid.at(ix, iy),
                          {"pixel (" + std::to_string(ix) + ", " + std::to_string(iy) +
                           "), seed " + std::to_string(grid.seed)});
}

void write_scan_packed(const std::string& path, const ScanGrid& grid) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");

  out.write(kMagic, sizeof kMagic);
  put_u32(out, static_cast<std::uint32_t>(grid.nx));
  put_u32(out, static_cast<std::uint32_t>(grid.ny));
  put_f64(out, grid.pitch_x_um);
  put_f64(out, grid.pitch_y_um);
  put_f64(out, grid.origin_x_um);
  put_f64(out, grid.origin_y_um);
  put_u64(out, grid.seed);
  const BeamConfig& b = grid.beam;
  for (double v : {b.photon_energy_keV, b.flux_photons_per_s, b.spot_width_um,
                   b.spot_height_um, b.energy_resolution, b.dwell_s})
    put_f64(out, v);
  const DetectorConfig& d = grid.detector;
  put_f64(out, d.distance_cm);
  put_f64(out, d.active_area_mm2);
  put_u32(out, static_cast<std::uint32_t>(d.energy_bins));
  for (double v : {d.bin_width_keV, d.first_edge_keV, d.noise_fwhm_keV, d.fano_factor,
                   d.pair_energy_keV})
    put_f64(out, v);
  for (const Spectrum& px : grid.pixels)
    for (double c : px.counts) put_f64(out, c);
  if (!out.good()) throw ConfigError("write failed for '" + path + "'");
}

ScanGrid read_scan_csv(const std::string& dir) {
  std::string meta_path = (fs::path(dir) / "meta.json").string();
  Json meta = jsonio::parse_json_text(read_text_file(meta_path), meta_path);
  jsonio::check_allowed_keys(meta,
                             {"container", "version", "nx", "ny", "pitch_x_um",
                              "pitch_y_um", "origin_x_um", "origin_y_um", "seed", "beam",
                              "detector"},
                             meta_path);
  if (!meta.contains("container") || meta.at("container") != "dmet-scan")
    throw ParseError(meta_path + ": not a dmet-scan container");
  for (const char* key : {"nx", "ny", "seed", "beam", "detector"})
    if (!meta.contains(key))
      throw ParseError(meta_path + ": missing key '" + std::string(key) + "'");

  jsonio::Fields f(&meta, "scan meta: ", nullptr);
  ScanGrid grid;
  grid.nx = f.get("nx", 0);
  grid.ny = f.get("ny", 0);
  grid.pitch_x_um = f.get("pitch_x_um", 0.0);
  grid.pitch_y_um = f.get("pitch_y_um", 0.0);
  grid.origin_x_um = f.get("origin_x_um", 0.0);
  grid.origin_y_um = f.get("origin_y_um", 0.0);
  grid.seed = f.get("seed", std::uint64_t{0});
  grid.beam = jsonio::beam_from_json(f.child("beam"), "scan meta beam: ", nullptr);
  grid.detector =
      jsonio::detector_from_json(f.child("detector"), "scan meta detector: ", nullptr);

  if (grid.nx <= 0 || grid.ny <= 0)
    throw ParseError(meta_path + ": bad scan dimensions");

  // The detector defines the canonical bin grid; the CSV energy column is
  // only checked for consistency.
  Spectrum canonical = Spectrum::zeros(grid.detector);
  grid.pixels.reserve(static_cast<std::size_t>(grid.nx) * grid.ny);
  for (int iy = 0; iy < grid.ny; ++iy)
    for (int ix = 0; ix < grid.nx; ++ix) {
      std::string px_path = (fs::path(dir) / pixel_filename(ix, iy)).string();
      Spectrum parsed = parse_spectrum_file(px_path);
      if (parsed.size() != canonical.size())
        throw ParseError(px_path + ": expected " + std::to_string(canonical.size()) +
                         " bins, got " + std::to_string(parsed.size()));
      if (std::abs(parsed.energy_at(0) - canonical.energy_at(0)) > 1e-9)
        throw ParseError(px_path + ": energy axis disagrees with the scan detector");
      Spectrum px = canonical;
      px.counts = std::move(parsed.counts);
      grid.pixels.push_back(std::move(px));
    }
  grid.validate();
  return grid;
}

ScanGrid read_scan_packed(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (in.gcount() != 8 || std::memcmp(magic, kMagic, 8) != 0)
    throw ParseError(path + ": not a packed scan (bad magic)");

  ScanGrid grid;
  grid.nx = static_cast<int>(get_u32(in, path));
  grid.ny = static_cast<int>(get_u32(in, path));
  grid.pitch_x_um = get_f64(in, path);
  grid.pitch_y_um = get_f64(in, path);
  grid.origin_x_um = get_f64(in, path);
  grid.origin_y_um = get_f64(in, path);
  grid.seed = get_u64(in, path);
  BeamConfig& b = grid.beam;
  b.photon_energy_keV = get_f64(in, path);
  b.flux_photons_per_s = get_f64(in, path);
  b.spot_width_um = get_f64(in, path);
  b.spot_height_um = get_f64(in, path);
  b.energy_resolution = get_f64(in, path);
  b.dwell_s = get_f64(in, path);
  DetectorConfig& d = grid.detector;
  d.distance_cm = get_f64(in, path);
  d.active_area_mm2 = get_f64(in, path);
  d.energy_bins = static_cast<int>(get_u32(in, path));
  d.bin_width_keV = get_f64(in, path);
  d.first_edge_keV = get_f64(in, path);
  d.noise_fwhm_keV = get_f64(in, path);
  d.fano_factor = get_f64(in, path);
  d.pair_energy_keV = get_f64(in, path);

  if (grid.nx <= 0 || grid.ny <= 0) throw ParseError(path + ": bad scan dimensions");
  b.validate();
  d.validate();

  Spectrum canonical = Spectrum::zeros(d);
  std::size_t n_pixels = static_cast<std::size_t>(grid.nx) * grid.ny;
  grid.pixels.reserve(n_pixels);
  for (std::size_t p = 0; p < n_pixels; ++p) {
    Spectrum px = canonical;
    for (double& c : px.counts) c = get_f64(in, path);
    grid.pixels.push_back(std::move(px));
  }
  grid.validate();
  return grid;
}

}  // namespace

ScanFormat parse_scan_format(const std::string& tag) {
  if (tag == "csv") return ScanFormat::csv;
  if (tag == "packed") return ScanFormat::packed;
  throw ConfigError("unknown scan format '" + tag + "' (expected csv or packed)");
}

void write_scan(const std::string& path, const ScanGrid& grid, ScanFormat format) {
  grid.validate();
  if (format == ScanFormat::csv)
    write_scan_csv(path, grid);
  else
    write_scan_packed(path, grid);
}

ScanGrid read_scan(const std::string& path) {
  if (fs::is_directory(path)) return read_scan_csv(path);
  if (!fs::exists(path)) throw ParseError("cannot open '" + path + "'");
  return read_scan_packed(path);
}

}  // namespace dmet
