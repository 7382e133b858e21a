#pragma once

#include <string>

#include "dmet/types.hpp"

namespace dmet {

enum class ScanFormat { csv, packed };

ScanFormat parse_scan_format(const std::string& tag);  // "csv" | "packed"

// Store a raster scan either as a directory of per-pixel CSV spectra plus a
// meta.json index (format csv; debuggable), or as one packed binary file
// (format packed). Packed layout, all little-endian:
//   bytes 0-7   magic "DMSC0001"
//   u32 nx, u32 ny
//   f64 pitch_x_um, pitch_y_um, origin_x_um, origin_y_um
//   u64 seed
//   f64 x6 beam   (photon_energy_keV, flux_photons_per_s, spot_width_um,
//                  spot_height_um, energy_resolution, dwell_s)
//   f64 x2 detector (distance_cm, active_area_mm2)
//   u32 energy_bins
//   f64 x5 detector (bin_width_keV, first_edge_keV, noise_fwhm_keV,
//                    fano_factor, pair_energy_keV)
//   f64 x (nx*ny*energy_bins) counts, row-major pixels, ascending bins
// For csv the path is the container directory; for packed it is the file.
void write_scan(const std::string& path, const ScanGrid& grid, ScanFormat format);

// Inverse reader; the format is detected from the path (directory -> csv,
// file -> packed, checked against the magic). The bin grid is rebuilt from
// the stored detector so reading is exact.
ScanGrid read_scan(const std::string& path);

}  // namespace dmet
