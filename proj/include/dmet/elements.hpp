#pragma once

#include <string>
#include <vector>

namespace dmet {

// One fluorescence emission line. A line emits only when the exciting beam
// energy reaches its absorption edge.
struct EmissionLine {
  std::string label;            // "Ka", "Kb", "La", ...
  double energy_keV = 0.0;
  double relative_intensity = 1.0;  // in (0,1]; sums to <= 1 per element
  double edge_energy_keV = 0.0;     // absorption edge feeding this line
  double transmission = 1.0;        // path/window transmission at the line energy
};

// Per-element emission model.
struct ElementTemplate {
  std::string symbol;
  std::vector<EmissionLine> lines;
  // Effective per-atom fluorescence cross-section [cm^2]: photoabsorption
  // cross-section at the working beam energy times fluorescence yield.
  // Expected counts in a line = density[cm^-2] * sensitivity * flux * dwell
  // * (solid angle / 4 pi) * relative_intensity * transmission.
  double sensitivity_cm2 = 0.0;
  // Mass attenuation coefficient at the working beam energy [cm^2/g]; the
  // sensitivity above is derived from it (times A/N_A times yield).
  double mass_attenuation_cm2_g = 0.0;

  void validate() const;  // >= 1 line, sensitivity > 0, intensity bounds
};

// Embedded line table covering Al, Si, Ar, Fe, As, Au. Energies follow
// standard X-ray wavelength tables; sensitivities are derived from mass
// attenuation at 11.88 keV and tabulated fluorescence yields.
const std::vector<ElementTemplate>& builtin_element_table();

// Lookup by symbol in a table. Unknown symbol -> ConfigError.
const ElementTemplate& find_element(const std::vector<ElementTemplate>& table,
                                    const std::string& symbol);

// Lookup in the embedded table.
const ElementTemplate& builtin_element(const std::string& symbol);

}  // namespace dmet
