#include "dmet/types.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"

namespace dmet {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

}  // namespace

void BeamConfig::validate() const {
  require(photon_energy_keV > 0, "beam: photon_energy_keV must be > 0");
  require(flux_photons_per_s > 0, "beam: flux_photons_per_s must be > 0");
  require(spot_width_um > 0 && spot_height_um > 0, "beam: spot dimensions must be > 0");
  require(energy_resolution > 0 && energy_resolution < 1,
          "beam: energy_resolution must lie in (0, 1)");
  require(dwell_s > 0, "beam: dwell_s must be > 0");
}

double DetectorConfig::radius_mm() const {
  return std::sqrt(active_area_mm2 / pi);
}

double DetectorConfig::solid_angle_sr() const {
  double d_mm = distance_cm * 10.0;
  double r = radius_mm();
  return 2.0 * pi * (1.0 - d_mm / std::sqrt(d_mm * d_mm + r * r));
}

double DetectorConfig::fwhm_keV(double energy_keV) const {
  double fano_term = 2.355 * 2.355 * fano_factor * pair_energy_keV * energy_keV;
  return std::sqrt(noise_fwhm_keV * noise_fwhm_keV + fano_term);
}

double DetectorConfig::max_energy_keV() const {
  return first_edge_keV + energy_bins * bin_width_keV;
}

void DetectorConfig::validate() const {
  require(distance_cm > 0, "detector: distance_cm must be > 0");
  require(active_area_mm2 > 0, "detector: active_area_mm2 must be > 0");
  require(energy_bins >= 2, "detector: energy_bins must be >= 2");
  require(bin_width_keV > 0, "detector: bin_width_keV must be > 0");
  require(first_edge_keV >= 0, "detector: first_edge_keV must be >= 0");
  require(noise_fwhm_keV >= 0, "detector: noise_fwhm_keV must be >= 0");
  require(fano_factor > 0, "detector: fano_factor must be > 0");
  require(pair_energy_keV > 0, "detector: pair_energy_keV must be > 0");
}

double channel_to_energy(int channel_index, const DetectorConfig& detector) {
  if (channel_index < 0 || channel_index >= detector.energy_bins)
    throw RangeError("channel " + std::to_string(channel_index) + " outside [0, " +
                     std::to_string(detector.energy_bins) + ")");
  return detector.first_edge_keV + (channel_index + 0.5) * detector.bin_width_keV;
}

double Spectrum::energy_at(std::size_t bin) const {
  if (bin >= size()) throw RangeError("spectrum bin " + std::to_string(bin) + " out of range");
  return 0.5 * (bin_edges_keV[bin] + bin_edges_keV[bin + 1]);
}

double Spectrum::total_counts() const {
  return std::accumulate(counts.begin(), counts.end(), 0.0);
}

Spectrum Spectrum::zeros(const DetectorConfig& detector) {
  detector.validate();
  Spectrum s;
  s.bin_edges_keV.resize(detector.energy_bins + 1);
  for (int i = 0; i <= detector.energy_bins; ++i)
    s.bin_edges_keV[i] = detector.first_edge_keV + i * detector.bin_width_keV;
  s.counts.assign(detector.energy_bins, 0.0);
  return s;
}

void Spectrum::validate() const {
  require(!counts.empty(), "spectrum: empty");
  require(bin_edges_keV.size() == counts.size() + 1,
          "spectrum: bin_edges length must be counts length + 1");
  for (std::size_t i = 0; i + 1 < bin_edges_keV.size(); ++i)
    require(bin_edges_keV[i] < bin_edges_keV[i + 1], "spectrum: bin edges not increasing");
  for (double c : counts)
    require(c >= 0, "spectrum: negative counts");
}

void accumulate(Spectrum& a, const Spectrum& b) {
  if (a.bin_edges_keV != b.bin_edges_keV)
    throw ConfigError("accumulate: spectra on different bin grids");
  for (std::size_t i = 0; i < a.counts.size(); ++i) a.counts[i] += b.counts[i];
}

const Spectrum& ScanGrid::at(int ix, int iy) const {
  if (ix < 0 || ix >= nx || iy < 0 || iy >= ny)
    throw RangeError("pixel (" + std::to_string(ix) + ", " + std::to_string(iy) +
                     ") outside " + std::to_string(nx) + "x" + std::to_string(ny) + " grid");
  return pixels[static_cast<std::size_t>(iy) * nx + ix];
}

void ScanGrid::validate() const {
  require(nx >= 1 && ny >= 1, "scan: nx, ny must be >= 1");
  require(pitch_x_um > 0 && pitch_y_um > 0, "scan: pitch must be > 0");
  require(pixels.size() == static_cast<std::size_t>(nx) * ny,
          "scan: pixel count does not match nx*ny");
  beam.validate();
  detector.validate();
}

void ExternalReference::validate() const {
  auto check = [](const std::optional<Measured>& m, const char* name) {
    if (!m) return;
    if (m->value <= 0) throw ConfigError(std::string("external reference: ") + name + " must be > 0");
    if (m->error < 0) throw ConfigError(std::string("external reference: ") + name + " error must be >= 0");
  };
  check(n_stm_cm2, "n_stm_cm2");
  check(n_sims_cm2, "n_sims_cm2");
  check(t_sims_nm, "t_sims_nm");
}

ArealDensityUnit parse_areal_density_unit(const std::string& tag) {
  if (tag == "cm^-2" || tag == "per_cm2" || tag == "cm-2") return ArealDensityUnit::per_cm2;
  if (tag == "um^-2" || tag == "per_um2" || tag == "um-2") return ArealDensityUnit::per_um2;
  if (tag == "nm^-2" || tag == "per_nm2" || tag == "nm-2") return ArealDensityUnit::per_nm2;
  throw ConfigError("unknown areal-density unit tag '" + tag + "'");
}

namespace {

// Scale of one unit relative to cm^-2.
double unit_scale(ArealDensityUnit u) {
  switch (u) {
    case ArealDensityUnit::per_cm2: return 1.0;
    case ArealDensityUnit::per_um2: return 1e-8;   // 1 cm^-2 = 1e-8 um^-2
    case ArealDensityUnit::per_nm2: return 1e-14;  // 1 cm^-2 = 1e-14 nm^-2
  }
  throw ConfigError("unknown areal-density unit");
}

}  // namespace

double areal_density_convert(double value, ArealDensityUnit from, ArealDensityUnit to) {
  if (value < 0) throw DomainError("areal density must be >= 0");
  return value * (unit_scale(to) / unit_scale(from));
}

double areal_density_convert(double value_per_cm2, ArealDensityUnit target) {
  return areal_density_convert(value_per_cm2, ArealDensityUnit::per_cm2, target);
}

std::uint64_t conditions_fingerprint(const BeamConfig& beam, const DetectorConfig& detector) {
  char buf[512];
  int len = std::snprintf(
      buf, sizeof buf,
      "beam:%.17g,%.17g,%.17g,%.17g,%.17g,%.17g|det:%.17g,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%.17g",
      beam.photon_energy_keV, beam.flux_photons_per_s, beam.spot_width_um,
      beam.spot_height_um, beam.energy_resolution, beam.dwell_s,
      detector.distance_cm, detector.active_area_mm2, detector.energy_bins,
      detector.bin_width_keV, detector.first_edge_keV, detector.noise_fwhm_keV,
      detector.fano_factor, detector.pair_energy_keV);
  // FNV-1a over the canonical rendering.
  std::uint64_t h = 1469598103934665603ull;
  for (int i = 0; i < len; ++i) {
    h ^= static_cast<unsigned char>(buf[i]);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace dmet
