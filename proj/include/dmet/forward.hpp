#pragma once

#include <cstdint>
#include <vector>

#include "dmet/elements.hpp"
#include "dmet/layout.hpp"
#include "dmet/types.hpp"

namespace dmet {

// Deposit a Gaussian of the given integrated area onto a spectrum's bin grid
// (exact bin integrals via erf, truncated beyond 6 sigma).
void add_gaussian(Spectrum& spectrum, double center_keV, double fwhm_keV, double area_counts);

// Compton-scattered photon energy at the given angle.
double compton_energy_keV(double beam_energy_keV, double angle_deg);

// Expected (noise-free) emission spectrum of one element at the given areal
// density. Line area = density * sensitivity * flux * dwell * (Omega/4pi)
// * relative_intensity * transmission; FWHM from the detector model. Lines
// whose edge lies above the beam energy contribute nothing.
Spectrum synth_element_peaks(const ElementTemplate& element, double density_per_cm2,
                             const BeamConfig& beam, const DetectorConfig& detector);

// Expected elastic + Compton scatter peaks with the given integrated areas.
// Throws DomainError unless 0 < angle < 180 and amplitudes >= 0.
Spectrum synth_scatter_peaks(const BeamConfig& beam, double elastic_counts,
                             double compton_counts, double scatter_angle_deg,
                             const DetectorConfig& detector);

// Expected spectrum under the spot centered at (x,y): element peaks with
// spot-averaged densities, plus the layout's scatter peaks and continuum.
// Throws RangeError when the position is outside the layout bounds.
Spectrum expected_pixel(const DeviceLayout& layout, double x_um, double y_um,
                        const BeamConfig& beam, const DetectorConfig& detector,
                        const std::vector<ElementTemplate>& table = builtin_element_table());

// expected_pixel with independent Poisson sampling per bin; deterministic for
// a fixed seed.
Spectrum simulate_pixel(const DeviceLayout& layout, double x_um, double y_um,
                        const BeamConfig& beam, const DetectorConfig& detector,
                        std::uint64_t seed,
                        const std::vector<ElementTemplate>& table = builtin_element_table());

// Raster of simulate_pixel on a regular lattice. Pixel centers sit at
// origin + (i + 0.5) * pitch; each pixel draws from its own derived seed, so
// the result is independent of traversal order. threads <= 0 means one.
ScanGrid simulate_scan(const DeviceLayout& layout, const BeamConfig& beam,
                       const DetectorConfig& detector, int nx, int ny,
                       double pitch_x_um, double pitch_y_um, std::uint64_t seed,
                       double origin_x_um = 0.0, double origin_y_um = 0.0,
                       const std::vector<ElementTemplate>& table = builtin_element_table(),
                       int threads = 1);

// Radiation exposure bookkeeping for one pixel dwell.
struct DoseReport {
  double fluence_photons_nm2 = 0.0;        // flux * dwell / spot area
  double accumulated_fluence_photons_nm2 = 0.0;  // with raster overlap factor
  double photons_absorbed_per_atom = 0.0;  // fluence * atom cross-section
  double energy_density_J_nm3 = 0.0;       // fluence * E_photon * linear absorption
  double dose_Gy = 0.0;                    // energy density / mass density
};

// First-principles dose estimate from the supplied coefficients:
//   fluence                 = flux * dwell / (spot_width * spot_height)
//   photons_absorbed_per_atom = fluence * atom_cross_section
//   energy_density          = fluence * photon_energy * absorption_per_um/1000
//   dose                    = energy_density / rho
// The accumulated fluence multiplies by the raster overlap factor
// (spot_width/pitch_x)*(spot_height/pitch_y) when pitches are given (a spot
// larger than the pitch re-exposes ground already dosed).
// dwell = 0 is allowed and yields an all-zero report.
DoseReport dose_report(const BeamConfig& beam, double dwell_s,
                       double absorption_per_um, double atom_cross_section_nm2,
                       double rho_g_cm3 = 2.329, double pitch_x_um = 0.0,
                       double pitch_y_um = 0.0);

}  // namespace dmet
