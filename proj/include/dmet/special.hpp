#pragma once

namespace dmet {

// Digamma function psi(x) = d/dx ln Gamma(x).
// Recurrence up to x >= 10, then the Bernoulli asymptotic series; reflection
// formula for x < 0.5. Relative accuracy <= 1e-12 for x >= 0.5.
// Throws DomainError at the poles (x a non-positive integer).
double digamma(double x);

// Trigamma function psi'(x), same scheme as digamma; needed for analytic
// Jacobians of the magnetoconductance models.
double trigamma(double x);

}  // namespace dmet
