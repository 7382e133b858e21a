#include "dmet/measured.hpp"

#include <cmath>
#include <limits>

namespace dmet {

double Measured::relative_error() const {
  if (error == 0.0) return 0.0;
  if (value == 0.0) return std::numeric_limits<double>::infinity();
  return std::abs(error / value);
}

double quadrature(double ra, double rb) { return std::sqrt(ra * ra + rb * rb); }

Measured scaled(const Measured& m, double k) {
  return {m.value * k, m.error * std::abs(k)};
}

Measured mul(const Measured& a, const Measured& b) {
  double v = a.value * b.value;
  return {v, std::abs(v) * quadrature(a.relative_error(), b.relative_error())};
}

Measured div(const Measured& a, const Measured& b) {
  double v = a.value / b.value;
  return {v, std::abs(v) * quadrature(a.relative_error(), b.relative_error())};
}

}  // namespace dmet
