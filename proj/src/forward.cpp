#include "dmet/forward.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"
#include "dmet/rng.hpp"

namespace dmet {

void add_gaussian(Spectrum& spectrum, double center_keV, double fwhm_keV,
                  double area_counts) {
  if (area_counts == 0.0) return;
  if (fwhm_keV <= 0) throw DomainError("add_gaussian: FWHM must be > 0");
  double sigma = fwhm_keV / 2.35482004503094938;  // 2*sqrt(2 ln 2)
  double inv = 1.0 / (sigma * 1.41421356237309505);
  const auto& edges = spectrum.bin_edges_keV;
  // Bins beyond 6 sigma hold < 1e-9 of the area; skip them.
  double lo = center_keV - 6.0 * sigma, hi = center_keV + 6.0 * sigma;
  auto first = std::upper_bound(edges.begin(), edges.end(), lo);
  if (first != edges.begin()) --first;
  std::size_t i = static_cast<std::size_t>(first - edges.begin());
  double cdf_prev = 0.5 * (1.0 + std::erf((edges[i] - center_keV) * inv));
  for (; i < spectrum.counts.size() && edges[i] < hi; ++i) {
    double cdf = 0.5 * (1.0 + std::erf((edges[i + 1] - center_keV) * inv));
    spectrum.counts[i] += area_counts * (cdf - cdf_prev);
    cdf_prev = cdf;
  }
}

double compton_energy_keV(double beam_energy_keV, double angle_deg) {
  if (beam_energy_keV <= 0) throw DomainError("compton: beam energy must be > 0");
  if (angle_deg <= 0 || angle_deg >= 180)
    throw DomainError("compton: scatter angle must lie in (0, 180)");
  double cos_theta = std::cos(angle_deg * pi / 180.0);
  return beam_energy_keV /
         (1.0 + (beam_energy_keV / constants.m_e_c2) * (1.0 - cos_theta));
}

Spectrum synth_element_peaks(const ElementTemplate& element, double density_per_cm2,
                             const BeamConfig& beam, const DetectorConfig& detector) {
  beam.validate();
  element.validate();
  if (density_per_cm2 < 0) throw DomainError("synth_element_peaks: density must be >= 0");
  Spectrum s = Spectrum::zeros(detector);
  if (density_per_cm2 == 0.0) return s;
  double photons = beam.flux_photons_per_s * beam.dwell_s;
  double geometry = detector.solid_angle_sr() / (4.0 * pi);
  double scale = density_per_cm2 * element.sensitivity_cm2 * photons * geometry;
  for (const auto& line : element.lines) {
    if (line.edge_energy_keV > beam.photon_energy_keV) continue;  // not excited
    add_gaussian(s, line.energy_keV, detector.fwhm_keV(line.energy_keV),
                 scale * line.relative_intensity * line.transmission);
  }
  return s;
}

Spectrum synth_scatter_peaks(const BeamConfig& beam, double elastic_counts,
                             double compton_counts, double scatter_angle_deg,
                             const DetectorConfig& detector) {
  beam.validate();
  if (elastic_counts < 0 || compton_counts < 0)
    throw DomainError("synth_scatter_peaks: amplitudes must be >= 0");
  Spectrum s = Spectrum::zeros(detector);
  double e0 = beam.photon_energy_keV;
  if (elastic_counts > 0) add_gaussian(s, e0, detector.fwhm_keV(e0), elastic_counts);
  if (compton_counts > 0) {
    double ec = compton_energy_keV(e0, scatter_angle_deg);
    add_gaussian(s, ec, detector.fwhm_keV(ec), compton_counts);
  }
  return s;
}

Spectrum expected_pixel(const DeviceLayout& layout, double x_um, double y_um,
                        const BeamConfig& beam, const DetectorConfig& detector,
                        const std::vector<ElementTemplate>& table) {
  if (!layout.contains(x_um, y_um))
    throw RangeError("pixel position (" + std::to_string(x_um) + ", " +
                     std::to_string(y_um) + ") um outside the layout bounds");
  double photons = beam.flux_photons_per_s * beam.dwell_s;
  Spectrum s = synth_scatter_peaks(beam, photons * layout.scatter.elastic_counts_per_photon,
                                   photons * layout.scatter.compton_counts_per_photon,
                                   layout.scatter.angle_deg, detector);
  for (const auto& symbol : layout.elements()) {
    double density = layout.average_density_per_cm2(
        symbol, x_um - beam.spot_width_um / 2, y_um - beam.spot_height_um / 2,
        x_um + beam.spot_width_um / 2, y_um + beam.spot_height_um / 2);
    accumulate(s, synth_element_peaks(find_element(table, symbol), density, beam, detector));
  }
  // Continuum: counts per (photon * keV), integrated over each bin width.
  if (!layout.continuum.coeffs.empty()) {
    for (std::size_t i = 0; i < s.counts.size(); ++i) {
      double e = s.energy_at(i);
      double poly = 0.0;
      for (std::size_t k = layout.continuum.coeffs.size(); k-- > 0;)
        poly = poly * e + layout.continuum.coeffs[k];
      double width = s.bin_edges_keV[i + 1] - s.bin_edges_keV[i];
      s.counts[i] += std::max(0.0, poly) * photons * width;
    }
  }
  return s;
}

Spectrum simulate_pixel(const DeviceLayout& layout, double x_um, double y_um,
                        const BeamConfig& beam, const DetectorConfig& detector,
                        std::uint64_t seed, const std::vector<ElementTemplate>& table) {
  Spectrum s = expected_pixel(layout, x_um, y_um, beam, detector, table);
  Rng rng(seed);
  for (double& c : s.counts) c = static_cast<double>(rng.poisson(c));
  return s;
}

ScanGrid simulate_scan(const DeviceLayout& layout, const BeamConfig& beam,
                       const DetectorConfig& detector, int nx, int ny,
                       double pitch_x_um, double pitch_y_um, std::uint64_t seed,
                       double origin_x_um, double origin_y_um,
                       const std::vector<ElementTemplate>& table, int threads) {
  if (nx < 1 || ny < 1) throw ConfigError("simulate_scan: nx, ny must be >= 1");
  if (pitch_x_um <= 0 || pitch_y_um <= 0)
    throw ConfigError("simulate_scan: pitch must be > 0");
  layout.validate();
  ScanGrid grid;
  grid.nx = nx;
  grid.ny = ny;
  grid.pitch_x_um = pitch_x_um;
  grid.pitch_y_um = pitch_y_um;
  grid.origin_x_um = origin_x_um;
  grid.origin_y_um = origin_y_um;
  grid.beam = beam;
  grid.detector = detector;
  grid.seed = seed;
  grid.pixels.resize(static_cast<std::size_t>(nx) * ny);

  // Every pixel draws from its own derived seed, so the result does not
  // depend on how pixels are distributed over threads.
  auto run_rows = [&](int y_begin, int y_end) {
    for (int iy = y_begin; iy < y_end; ++iy)
      for (int ix = 0; ix < nx; ++ix) {
        std::uint64_t index = static_cast<std::uint64_t>(iy) * nx + ix;
        grid.pixels[index] =
            simulate_pixel(layout, grid.pixel_x_um(ix), grid.pixel_y_um(iy), beam,
                           detector, Rng::derive(seed, index), table);
      }
  };
  int n_threads = std::max(1, std::min(threads, ny));
  if (n_threads == 1) {
    run_rows(0, ny);
  } else {
    std::vector<std::thread> pool;
    int chunk = (ny + n_threads - 1) / n_threads;
    for (int t = 0; t < n_threads; ++t) {
      int y0 = t * chunk, y1 = std::min(ny, y0 + chunk);
      if (y0 >= y1) break;
      pool.emplace_back(run_rows, y0, y1);
    }
    for (auto& th : pool) th.join();
  }
  return grid;
}

DoseReport dose_report(const BeamConfig& beam, double dwell_s, double absorption_per_um,
                       double atom_cross_section_nm2, double rho_g_cm3,
                       double pitch_x_um, double pitch_y_um) {
  beam.validate();
  if (dwell_s < 0) throw DomainError("dose_report: dwell must be >= 0");
  if (absorption_per_um <= 0 || atom_cross_section_nm2 <= 0 || rho_g_cm3 <= 0)
    throw DomainError("dose_report: coefficients must be > 0");
  DoseReport r;
  // Spot area in nm^2; fluence per single dwell.
  double spot_nm2 = beam.spot_width_um * beam.spot_height_um * 1e6;
  r.fluence_photons_nm2 = beam.flux_photons_per_s * dwell_s / spot_nm2;
  double overlap = 1.0;
  if (pitch_x_um > 0) overlap *= beam.spot_width_um / pitch_x_um;
  if (pitch_y_um > 0) overlap *= beam.spot_height_um / pitch_y_um;
  r.accumulated_fluence_photons_nm2 = r.fluence_photons_nm2 * std::max(1.0, overlap);
  r.photons_absorbed_per_atom = r.fluence_photons_nm2 * atom_cross_section_nm2;
  // Deposited energy per volume: fluence * linear absorption * photon energy.
  double absorption_per_nm = absorption_per_um * 1e-3;
  double photon_J = beam.photon_energy_keV * kev_to_joule;
  r.energy_density_J_nm3 = r.fluence_photons_nm2 * absorption_per_nm * photon_J;
  // Gy = J/kg: 1 cm^3 = 1e21 nm^3, so 1 nm^3 weighs rho * 1e-21 g.
  double kg_per_nm3 = rho_g_cm3 * 1e-21 * 1e-3;
  r.dose_Gy = r.energy_density_J_nm3 / kg_per_nm3;
  return r;
}

}  // namespace dmet
