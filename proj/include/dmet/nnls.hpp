#pragma once

#include <vector>

#include <Eigen/Dense>

namespace dmet {

// Solution of a partially non-negative weighted least-squares problem.
struct NnlsResult {
  Eigen::VectorXd x;           // coefficients, constrained entries >= 0
  std::vector<bool> at_bound;  // true where the non-negativity bound is active
  int iterations = 0;
};

// Minimize || W^(1/2) (A x - y) ||^2 subject to x_j >= 0 for j < n_constrained;
// the remaining columns (background terms) are unconstrained. Lawson-Hanson
// active-set on the weighted normal equations, with the free columns always in
// the passive set. Terminates exactly: on return the passive-set solution is
// the unconstrained optimum of that subset.
// Throws FitError when the passive normal matrix becomes numerically singular.
NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                const Eigen::VectorXd& w, int n_constrained);

}  // namespace dmet
