#include "dmet/wl.hpp"

#include <cmath>

#include "dmet/constants.hpp"
#include "dmet/errors.hpp"
#include "dmet/special.hpp"

namespace dmet {

double sigma0_S() {
  return constants.e * constants.e / (2.0 * pi * pi * constants.hbar);
}

CharacteristicFields characteristic_fields(double L_nm, double Lphi_nm) {
  if (L_nm <= 0 || Lphi_nm <= 0)
    throw DomainError("characteristic_fields: lengths must be > 0");
  double L = L_nm * 1e-9, Lphi = Lphi_nm * 1e-9;
  CharacteristicFields f;
  f.B_phi_T = constants.hbar / (4.0 * constants.e * Lphi * Lphi);
  f.B_L_T = constants.hbar / (2.0 * constants.e * L * L);
  f.sigma0_S = sigma0_S();
  return f;
}

double delta_sigma_perpendicular(double B_T, double L_nm, double Lphi_nm) {
  if (B_T < 0) throw DomainError("delta_sigma_perpendicular: B must be >= 0");
  if (!(Lphi_nm > L_nm) || L_nm <= 0)
    throw DomainError("delta_sigma_perpendicular: requires L_phi > L > 0");
  if (B_T == 0.0) return 0.0;  // analytic limit; digamma terms cancel the log
  CharacteristicFields f = characteristic_fields(L_nm, Lphi_nm);
  double sat = std::log(2.0 * (Lphi_nm / L_nm) * (Lphi_nm / L_nm));
  return f.sigma0_S *
         (digamma(0.5 + f.B_phi_T / B_T) - digamma(0.5 + f.B_L_T / B_T) + sat);
}

double delta_sigma_parallel(double B_T, double gamma_per_T2) {
  if (B_T < 0) throw DomainError("delta_sigma_parallel: B must be >= 0");
  if (gamma_per_T2 < 0) throw DomainError("delta_sigma_parallel: gamma must be >= 0");
  return sigma0_S() * std::log1p(gamma_per_T2 * B_T * B_T);
}

double delta_sigma_tilt(double B_T, double angle_deg, double L_nm, double Lphi_nm,
                        double gamma_per_T2, double p) {
  if (B_T < 0) throw DomainError("delta_sigma_tilt: B must be >= 0");
  if (angle_deg < 0 || angle_deg > 90)
    throw DomainError("delta_sigma_tilt: angle must lie in [0, 90] degrees");
  if (p <= 0) throw DomainError("delta_sigma_tilt: p must be > 0");
  // Exact endpoints first, so 0 and 90 degrees reduce to the pure models for
  // every p.
  if (angle_deg == 0.0) return delta_sigma_parallel(B_T, gamma_per_T2);
  if (angle_deg == 90.0) return delta_sigma_perpendicular(B_T, L_nm, Lphi_nm);
  double a = angle_deg * pi / 180.0;
  double ds_perp = delta_sigma_perpendicular(B_T * std::sin(a), L_nm, Lphi_nm);
  double ds_par = delta_sigma_parallel(B_T * std::cos(a), gamma_per_T2);
  return std::pow(std::pow(ds_perp, p) + std::pow(ds_par, p), 1.0 / p);
}

void MagnetoTrace::validate() const {
  if (field_T.size() != value.size())
    throw ConfigError("trace: field and value lengths differ");
  if (!error.empty() && error.size() != value.size())
    throw ConfigError("trace: error length differs from values");
  if (orientation == Orientation::tilt && angle_deg.size() != value.size())
    throw ConfigError("trace: tilt traces need one angle per point");
  if (size() < 5)
    throw InsufficientDataError("trace: at least 5 points required, got " +
                                std::to_string(size()));
  for (double b : field_T)
    if (!std::isfinite(b)) throw ConfigError("trace: non-finite field value");
  for (double v : value)
    if (!std::isfinite(v)) throw ConfigError("trace: non-finite data value");
  for (double e : error)
    if (!(e > 0)) throw ConfigError("trace: per-point errors must be > 0");
}

}  // namespace dmet
