#pragma once

#include <string>
#include <vector>

#include "dmet/measured.hpp"

namespace dmet {

// Weak-localization parameter set for one device state.
// Validity requires L_phi > L; violations are flagged, never clamped.
struct WlParams {
  Measured L_nm;            // mean free path
  Measured Lphi_nm;         // phase coherence length
  Measured gamma_per_T2;    // parallel-field coefficient
  Measured p;               // tilt-mixing exponent
  Measured t_nm;            // layer thickness
  bool validity_warning = false;  // set when L_phi <= L
};

// sigma_0 = e^2 / (2 pi^2 hbar), the conductance scale of the
// magnetoconductance models [S].
double sigma0_S();

struct CharacteristicFields {
  double B_phi_T = 0.0;   // hbar / (4 e L_phi^2)
  double B_L_T = 0.0;     // hbar / (2 e L^2)
  double sigma0_S = 0.0;  // e^2 / (2 pi^2 hbar)
};

// Characteristic fields from the two lengths. Nonpositive length -> DomainError.
CharacteristicFields characteristic_fields(double L_nm, double Lphi_nm);

// Perpendicular-field magnetoconductance correction [S]:
//   delta_sigma(B) = sigma0 * ( psi(1/2 + B_phi/B) - psi(1/2 + B_L/B)
//                               + ln(2 L_phi^2 / L^2) )
// Returns the analytic limit 0 at B = 0. Requires L_phi > L > 0, B >= 0.
double delta_sigma_perpendicular(double B_T, double L_nm, double Lphi_nm);

// Parallel-field correction [S]: sigma0 * ln(1 + gamma B^2), gamma >= 0.
double delta_sigma_parallel(double B_T, double gamma_per_T2);

// Tilted-field correction [S] at `angle_deg` measured from the sample plane
// (0 = in-plane, 90 = perpendicular). The field decomposes geometrically:
// B sin(angle) drives the perpendicular response, B cos(angle) the parallel
// one, and the two combine through the mixing exponent p:
//   delta_sigma = ( ds_perp(B sin a)^p + ds_par(B cos a)^p )^(1/p)
// Exactly reduces to the pure responses at 90 and 0 degrees.
double delta_sigma_tilt(double B_T, double angle_deg, double L_nm, double Lphi_nm,
                        double gamma_per_T2, double p);

enum class Orientation { perpendicular, parallel, tilt };
enum class TraceQuantity { delta_sigma, r_xy };

// One magnetotransport sweep. For perpendicular/parallel traces, field_T is
// the swept magnitude. Tilt traces sweep the angle at fixed |B| and carry a
// per-point angle. Errors are optional (empty = uniform weights).
struct MagnetoTrace {
  Orientation orientation = Orientation::perpendicular;
  TraceQuantity quantity = TraceQuantity::delta_sigma;
  double temperature_K = 0.0;
  std::vector<double> field_T;
  std::vector<double> angle_deg;  // tilt traces only, one per point
  std::vector<double> value;      // delta_sigma [S] or R_xy [Ohm]
  std::vector<double> error;      // optional 1-sigma per point

  std::size_t size() const { return value.size(); }
  void validate() const;  // finite fields, matching lengths, >= 5 points
};

}  // namespace dmet
