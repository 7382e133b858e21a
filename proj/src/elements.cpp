#include "dmet/elements.hpp"

#include <map>

#include "dmet/errors.hpp"

namespace dmet {

void ElementTemplate::validate() const {
  if (symbol.empty()) throw ConfigError("element template: empty symbol");
  if (lines.empty()) throw ConfigError("element '" + symbol + "': needs at least one line");
  if (sensitivity_cm2 <= 0)
    throw ConfigError("element '" + symbol + "': sensitivity must be > 0");
  // Relative intensities must sum to <= 1 within each line series (K, L, M),
  // keyed by the first letter of the label.
  std::map<char, double> series_sum;
  for (const auto& line : lines) {
    if (line.energy_keV <= 0 || line.edge_energy_keV <= 0)
      throw ConfigError("element '" + symbol + "': line energies must be > 0");
    if (line.relative_intensity <= 0 || line.relative_intensity > 1)
      throw ConfigError("element '" + symbol + "': relative intensity outside (0, 1]");
    if (line.transmission < 0 || line.transmission > 1)
      throw ConfigError("element '" + symbol + "': transmission outside [0, 1]");
    series_sum[line.label.empty() ? '?' : line.label[0]] += line.relative_intensity;
  }
  for (const auto& [series, sum] : series_sum)
    if (sum > 1.0 + 1e-9)
      throw ConfigError("element '" + symbol + "': " + series +
                        std::string("-series intensities sum to > 1"));
}

// Line energies and edges follow the standard X-ray wavelength tables
// (Bearden energies, keV). Sensitivities are effective per-atom fluorescence
// cross-sections at an 11.88 keV working energy:
//   sensitivity = (mu/rho)(11.88 keV) * A / N_A * fluorescence yield
// with mass attenuation in cm^2/g, atomic mass A in g/mol. Transmissions
// model the air-path plus window losses at the emission energy (soft lines
// are attenuated hardest).
const std::vector<ElementTemplate>& builtin_element_table() {
  static const std::vector<ElementTemplate> table = [] {
    std::vector<ElementTemplate> t;

    // mu/rho 14.76 cm^2/g, A 26.982, omega_K 0.039.
    t.push_back({"Al",
                 {{"Ka", 1.4867, 0.98, 1.5596, 0.15},
                  {"Kb", 1.5575, 0.02, 1.5596, 0.16}},
                 2.579e-23,
                 14.76});

    // mu/rho 20.5 cm^2/g, A 28.086, omega_K 0.047.
    t.push_back({"Si",
                 {{"Ka", 1.7400, 0.97, 1.8389, 0.22},
                  {"Kb", 1.8359, 0.03, 1.8389, 0.24}},
                 4.494e-23,
                 20.5});

    // mu/rho 37.0 cm^2/g, A 39.948, omega_K 0.118.
    t.push_back({"Ar",
                 {{"Ka", 2.9577, 0.90, 3.2029, 0.55},
                  {"Kb", 3.1905, 0.10, 3.2029, 0.58}},
                 2.896e-22,
                 37.0});

    // mu/rho 107.3 cm^2/g, A 55.845, omega_K 0.347.
    t.push_back({"Fe",
                 {{"Ka", 6.4039, 0.88, 7.1120, 0.97},
                  {"Kb", 7.0580, 0.12, 7.1120, 0.98}},
                 3.453e-21,
                 107.3});

    // mu/rho 220 cm^2/g just above the K edge, A 74.922, omega_K 0.562.
    t.push_back({"As",
                 {{"Ka", 10.5437, 0.86, 11.8667, 1.00},
                  {"Kb", 11.7262, 0.14, 11.8667, 1.00}},
                 1.538e-20,
                 220.0});

    // Below the L3 edge at the working energy: only the M series emits.
    // mu/rho 77 cm^2/g, A 196.967, omega_M ~ 0.02.
    t.push_back({"Au",
                 {{"Ma", 2.1229, 0.90, 2.2057, 0.40},
                  {"La", 9.7133, 0.80, 11.9187, 1.00},
                  {"Lb", 11.4423, 0.20, 13.7336, 1.00}},
                 5.04e-22,
                 77.0});

    for (auto& e : t) e.validate();
    return t;
  }();
  return table;
}

const ElementTemplate& find_element(const std::vector<ElementTemplate>& table,
                                    const std::string& symbol) {
  for (const auto& e : table)
    if (e.symbol == symbol) return e;
  throw ConfigError("unknown element '" + symbol + "'");
}

const ElementTemplate& builtin_element(const std::string& symbol) {
  return find_element(builtin_element_table(), symbol);
}

}  // namespace dmet
