#include "dmet/layout.hpp"

#include <algorithm>
#include <cmath>

#include "dmet/errors.hpp"

namespace dmet {

double Polygon::area_um2() const {
  // Shoelace formula; magnitude, so winding does not matter.
  double twice = 0.0;
  std::size_t n = vertices_um.size();
  if (n < 3) return 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = vertices_um[i];
    const auto& b = vertices_um[(i + 1) % n];
    twice += a[0] * b[1] - b[0] * a[1];
  }
  return std::abs(twice) / 2.0;
}

Polygon Polygon::rect(double x0, double y0, double x1, double y1) {
  return {{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

namespace {

using Pt = std::array<double, 2>;

// Clip a polygon against the half-plane keep(p) == true; `cross` must return
// the intersection of segment [a,b] with the half-plane boundary.
template <typename Keep, typename Cross>
std::vector<Pt> clip_halfplane(const std::vector<Pt>& poly, Keep keep, Cross cross) {
  std::vector<Pt> out;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Pt& cur = poly[i];
    const Pt& prev = poly[(i + n - 1) % n];
    bool cur_in = keep(cur), prev_in = keep(prev);
    if (cur_in) {
      if (!prev_in) out.push_back(cross(prev, cur));
      out.push_back(cur);
    } else if (prev_in) {
      out.push_back(cross(prev, cur));
    }
  }
  return out;
}

std::vector<Pt> at_x(const std::vector<Pt>& poly, double x, bool keep_right) {
  return clip_halfplane(
      poly, [=](const Pt& p) { return keep_right ? p[0] >= x : p[0] <= x; },
      [=](const Pt& a, const Pt& b) -> Pt {
        double t = (x - a[0]) / (b[0] - a[0]);
        return {x, a[1] + t * (b[1] - a[1])};
      });
}

std::vector<Pt> at_y(const std::vector<Pt>& poly, double y, bool keep_above) {
  return clip_halfplane(
      poly, [=](const Pt& p) { return keep_above ? p[1] >= y : p[1] <= y; },
      [=](const Pt& a, const Pt& b) -> Pt {
        double t = (y - a[1]) / (b[1] - a[1]);
        return {a[0] + t * (b[0] - a[0]), y};
      });
}

}  // namespace

double clipped_area_um2(const Polygon& poly, double x0, double y0, double x1, double y1) {
  if (poly.vertices_um.size() < 3) return 0.0;
  std::vector<Pt> p = poly.vertices_um;
  p = at_x(p, x0, true);
  if (p.size() < 3) return 0.0;
  p = at_x(p, x1, false);
  if (p.size() < 3) return 0.0;
  p = at_y(p, y0, true);
  if (p.size() < 3) return 0.0;
  p = at_y(p, y1, false);
  if (p.size() < 3) return 0.0;
  return Polygon{p}.area_um2();
}

bool DeviceLayout::contains(double x_um, double y_um) const {
  return x_um >= x0_um && x_um <= x1_um && y_um >= y0_um && y_um <= y1_um;
}

double DeviceLayout::average_density_per_cm2(const std::string& element, double rx0,
                                             double ry0, double rx1, double ry1) const {
  double rect_area = (rx1 - rx0) * (ry1 - ry0);
  if (rect_area <= 0) throw DomainError("average_density: empty footprint");
  double density = 0.0;
  for (const auto& region : regions) {
    if (region.element != element) continue;
    density += region.density_per_cm2 *
               (clipped_area_um2(region.polygon, rx0, ry0, rx1, ry1) / rect_area);
  }
  auto bg = background_per_cm2.find(element);
  if (bg != background_per_cm2.end()) density += bg->second;
  return density;
}

double DeviceLayout::atoms_in_spot(const std::string& element, double x_um, double y_um,
                                   double spot_width_um, double spot_height_um) const {
  double density = average_density_per_cm2(element, x_um - spot_width_um / 2,
                                           y_um - spot_height_um / 2,
                                           x_um + spot_width_um / 2,
                                           y_um + spot_height_um / 2);
  // cm^-2 -> um^-2 is a factor 1e-8.
  return density * 1e-8 * spot_width_um * spot_height_um;
}

std::vector<std::string> DeviceLayout::elements() const {
  std::vector<std::string> out;
  for (const auto& region : regions) out.push_back(region.element);
  for (const auto& [symbol, density] : background_per_cm2) out.push_back(symbol);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void DeviceLayout::validate() const {
  if (!(x1_um > x0_um && y1_um > y0_um))
    throw ConfigError("layout: bounds must satisfy x1 > x0, y1 > y0");
  for (const auto& region : regions) {
    if (region.density_per_cm2 < 0)
      throw ConfigError("layout: negative density for '" + region.element + "'");
    if (region.polygon.vertices_um.size() < 3)
      throw ConfigError("layout: region of '" + region.element + "' has fewer than 3 vertices");
    for (const auto& v : region.polygon.vertices_um)
      if (v[0] < x0_um || v[0] > x1_um || v[1] < y0_um || v[1] > y1_um)
        throw ConfigError("layout: region of '" + region.element + "' leaves the scan bounds");
  }
  for (const auto& [symbol, density] : background_per_cm2)
    if (density < 0) throw ConfigError("layout: negative background density for '" + symbol + "'");
  if (scatter.elastic_counts_per_photon < 0 || scatter.compton_counts_per_photon < 0)
    throw ConfigError("layout: scatter amplitudes must be >= 0");
  if (scatter.angle_deg <= 0 || scatter.angle_deg >= 180)
    throw ConfigError("layout: scatter angle must lie in (0, 180)");
}

}  // namespace dmet
