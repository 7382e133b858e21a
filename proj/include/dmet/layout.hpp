#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

namespace dmet {

// Simple polygon in device coordinates [um]. Vertices in order (either
// winding); no self-intersection expected.
struct Polygon {
  std::vector<std::array<double, 2>> vertices_um;

  double area_um2() const;  // shoelace formula, always >= 0

  // Axis-aligned rectangle helper.
  static Polygon rect(double x0, double y0, double x1, double y1);
};

// Area of polygon ∩ [x0,x1]x[y0,y1] (Sutherland-Hodgman clip + shoelace).
double clipped_area_um2(const Polygon& poly, double x0, double y0, double x1, double y1);

// Constant-density polygonal patch of one element.
struct LayoutRegion {
  std::string element;       // symbol into the element table
  double density_per_cm2 = 0.0;
  Polygon polygon;
};

// Scatter contribution of the substrate/environment, per incident photon.
struct ScatterSpec {
  double elastic_counts_per_photon = 0.0;
  double compton_counts_per_photon = 0.0;
  double angle_deg = 90.0;  // scattering angle for the Compton shift
};

// Smooth continuum under the peaks: counts per (incident photon * keV),
// polynomial in energy. expected bin counts = poly(E_center) * photons * bin width.
struct ContinuumSpec {
  std::vector<double> coeffs;  // c0 + c1*E + c2*E^2 + ... [counts/(photon keV^(k+1))]
};

// Areal-density map of a device: polygonal regions of constant density plus a
// uniform per-element background, with the pixel-independent scatter and
// continuum terms that belong to the same acquisition.
struct DeviceLayout {
  double x0_um = 0.0, y0_um = 0.0;  // scan bounds (inclusive)
  double x1_um = 0.0, y1_um = 0.0;
  std::vector<LayoutRegion> regions;
  std::map<std::string, double> background_per_cm2;  // uniform element densities
  ScatterSpec scatter;
  ContinuumSpec continuum;

  bool contains(double x_um, double y_um) const;

  // Mean density of one element over the rectangle [x0,x1]x[y0,y1]:
  // sum over that element's regions of density * overlap_area / rect_area,
  // plus its uniform background term.
  double average_density_per_cm2(const std::string& element, double x0_um,
                                 double y0_um, double x1_um, double y1_um) const;

  // Expected number of atoms of `element` inside a spot of the given size
  // centered at (x,y).
  double atoms_in_spot(const std::string& element, double x_um, double y_um,
                       double spot_width_um, double spot_height_um) const;

  // All element symbols appearing in regions or background, sorted, unique.
  std::vector<std::string> elements() const;

  void validate() const;  // densities >= 0, regions inside bounds
};

}  // namespace dmet
