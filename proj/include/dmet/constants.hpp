#pragma once

namespace dmet {

// Fundamental constants, CODATA 2018. Fixed at compile time; never configurable.
struct PhysicalConstants {
  double e;       // elementary charge [C] (exact by SI definition)
  double hbar;    // reduced Planck constant [J s] (h exact, divided by 2*pi)
  double m_e_c2;  // electron rest energy [keV]
};

inline constexpr PhysicalConstants constants{
    1.602176634e-19,
    1.054571817646156391e-34,
    510.99895000,
};

inline constexpr double pi = 3.14159265358979323846;

// keV -> J (exact: 1 eV = e joule).
inline constexpr double kev_to_joule = 1.602176634e-16;

}  // namespace dmet
