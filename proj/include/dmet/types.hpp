#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmet/measured.hpp"

namespace dmet {

// Incident X-ray beam. Spot is a uniform (top-hat) rectangle.
struct BeamConfig {
  double photon_energy_keV = 11.88;
  double flux_photons_per_s = 1e10;
  double spot_width_um = 1.0;   // along scan x
  double spot_height_um = 1.0;  // along scan y
  double energy_resolution = 1e-4;  // dE/E, dimensionless
  double dwell_s = 0.2;             // exposure per pixel

  void validate() const;  // throws ConfigError on any violated bound
};

// Energy-dispersive detector with a Gaussian line response.
struct DetectorConfig {
  double distance_cm = 2.0;
  double active_area_mm2 = 50.0;
  int energy_bins = 2048;
  double bin_width_keV = 0.01;
  double first_edge_keV = 0.0;  // lower edge of bin 0
  // Line width model: FWHM(E) = sqrt(noise_fwhm^2 + 2.355^2 * fano * pair * E).
  double noise_fwhm_keV = 0.10;
  double fano_factor = 0.115;
  double pair_energy_keV = 0.00385;  // electron-hole pair creation energy

  double radius_mm() const;      // sqrt(active_area / pi)
  double solid_angle_sr() const; // 2*pi*(1 - d/sqrt(d^2 + r^2))
  double fwhm_keV(double energy_keV) const;
  double max_energy_keV() const;  // upper edge of the last bin

  void validate() const;
};

// Bin-center energy of a channel. Throws RangeError when the index is outside
// [0, energy_bins).
double channel_to_energy(int channel_index, const DetectorConfig& detector);

// Binned photon-count histogram with explicit energy calibration.
struct Spectrum {
  std::vector<double> bin_edges_keV;  // length N+1, strictly increasing
  std::vector<double> counts;         // length N, all >= 0

  std::size_t size() const { return counts.size(); }
  double energy_at(std::size_t bin) const;  // bin-center energy
  double total_counts() const;

  // Zeroed spectrum on the detector's uniform bin grid.
  static Spectrum zeros(const DetectorConfig& detector);

  void validate() const;  // throws ConfigError on malformed edges or counts
};

// Add b into a (same bin grid required).
void accumulate(Spectrum& a, const Spectrum& b);

// Raster scan: row-major pixels, index iy*nx + ix, pixel centers at
// origin + (i + 0.5) * pitch.
struct ScanGrid {
  int nx = 0, ny = 0;
  double pitch_x_um = 0.5, pitch_y_um = 0.5;
  double origin_x_um = 0.0, origin_y_um = 0.0;
  BeamConfig beam;
  DetectorConfig detector;
  std::uint64_t seed = 0;
  std::vector<Spectrum> pixels;

  const Spectrum& at(int ix, int iy) const;  // throws RangeError
  double pixel_x_um(int ix) const { return origin_x_um + (ix + 0.5) * pitch_x_um; }
  double pixel_y_um(int iy) const { return origin_y_um + (iy + 0.5) * pitch_y_um; }

  void validate() const;
};

// Independently measured reference values for one device, used only for
// side-by-side comparison in reports.
struct ExternalReference {
  std::optional<Measured> n_stm_cm2;
  std::optional<Measured> n_sims_cm2;
  std::optional<Measured> t_sims_nm;

  void validate() const;  // present values > 0, errors >= 0
};

// Areal-density units accepted at API boundaries.
enum class ArealDensityUnit { per_cm2, per_um2, per_nm2 };

// Parse a unit tag such as "cm^-2", "um^-2", "nm^-2". Unknown tag -> ConfigError.
ArealDensityUnit parse_areal_density_unit(const std::string& tag);

// Exact power-of-ten rescaling between areal-density units.
double areal_density_convert(double value, ArealDensityUnit from, ArealDensityUnit to);

// Convenience overload: value given in cm^-2.
double areal_density_convert(double value_per_cm2, ArealDensityUnit target);

// FNV-1a hash over the acquisition conditions (beam + detector + dwell);
// used to guard calibration transfer between datasets.
std::uint64_t conditions_fingerprint(const BeamConfig& beam, const DetectorConfig& detector);

}  // namespace dmet
