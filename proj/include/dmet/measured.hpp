#pragma once

namespace dmet {

// A scalar with a one-sigma standard error.
struct Measured {
  double value = 0.0;
  double error = 0.0;  // standard error, >= 0

  // |error/value|; 0 when error is 0, +inf when value is 0 but error is not.
  double relative_error() const;
};

// sqrt(ra^2 + rb^2): combined relative error of a product or quotient of
// independent quantities.
double quadrature(double ra, double rb);

// Exact scaling: value scales by k, error by |k|.
Measured scaled(const Measured& m, double k);

// Product / quotient with independent-error propagation (relative errors in
// quadrature).
Measured mul(const Measured& a, const Measured& b);
Measured div(const Measured& a, const Measured& b);

}  // namespace dmet
