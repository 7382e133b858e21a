#include "dmet/nnls.hpp"

#include <cmath>

#include "dmet/errors.hpp"

namespace dmet {

namespace {

// Solve the passive-set normal equations G[P,P] z = b[P].
Eigen::VectorXd solve_subset(const Eigen::MatrixXd& G, const Eigen::VectorXd& b,
                             const std::vector<int>& passive) {
  int k = static_cast<int>(passive.size());
  Eigen::MatrixXd Gp(k, k);
  Eigen::VectorXd bp(k);
  for (int i = 0; i < k; ++i) {
    bp(i) = b(passive[i]);
    for (int j = 0; j < k; ++j) Gp(i, j) = G(passive[i], passive[j]);
  }
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Gp);
  if (qr.rank() < k)
    throw FitError("nnls: singular normal equations on the active column set");
  return qr.solve(bp);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& y,
                const Eigen::VectorXd& w, int n_constrained) {
  const int n = static_cast<int>(A.cols());
  if (n_constrained < 0 || n_constrained > n)
    throw ConfigError("nnls: n_constrained outside [0, columns]");
  if (A.rows() != y.size() || A.rows() != w.size())
    throw ConfigError("nnls: dimension mismatch");

  // Weighted normal equations; all subsequent algebra is n x n.
  Eigen::MatrixXd Aw = w.asDiagonal() * A;
  Eigen::MatrixXd G = A.transpose() * Aw;          // A^T W A
  Eigen::VectorXd b = A.transpose() * (w.cwiseProduct(y));  // A^T W y

  NnlsResult result;
  result.x = Eigen::VectorXd::Zero(n);
  result.at_bound.assign(n, false);

  std::vector<bool> passive(n, false);
  std::vector<int> passive_list;
  auto rebuild_list = [&] {
    passive_list.clear();
    for (int j = 0; j < n; ++j)
      if (passive[j]) passive_list.push_back(j);
  };
  for (int j = n_constrained; j < n; ++j) passive[j] = true;
  rebuild_list();

  // Free columns enter the solution before any constrained column is tried.
  if (!passive_list.empty()) {
    Eigen::VectorXd z = solve_subset(G, b, passive_list);
    for (std::size_t i = 0; i < passive_list.size(); ++i) result.x(passive_list[i]) = z(i);
  }

  const double tol = 1e-12 * std::max(1.0, b.cwiseAbs().maxCoeff());
  const int max_outer = 3 * n + 10;

  for (int outer = 0; outer < max_outer; ++outer) {
    // Most negative-gradient constrained candidate.
    Eigen::VectorXd grad = b - G * result.x;
    int best = -1;
    double best_grad = tol;
    for (int j = 0; j < n_constrained; ++j)
      if (!passive[j] && grad(j) > best_grad) {
        best_grad = grad(j);
        best = j;
      }
    if (best < 0) break;  // KKT satisfied
    passive[best] = true;
    rebuild_list();

    for (int inner = 0;; ++inner) {
      if (inner > 10 * n + 10) throw FitError("nnls: inner loop failed to settle");
      Eigen::VectorXd z = solve_subset(G, b, passive_list);
      // Feasible step: full when all constrained passive entries stay positive.
      double alpha = 1.0;
      int blocker = -1;
      for (std::size_t i = 0; i < passive_list.size(); ++i) {
        int j = passive_list[i];
        if (j >= n_constrained || z(i) > 0) continue;
        double step = result.x(j) / (result.x(j) - z(i));
        if (step < alpha) {
          alpha = step;
          blocker = j;
        }
      }
      if (blocker < 0) {
        for (std::size_t i = 0; i < passive_list.size(); ++i)
          result.x(passive_list[i]) = z(i);
        break;
      }
      for (std::size_t i = 0; i < passive_list.size(); ++i) {
        int j = passive_list[i];
        result.x(j) += alpha * (z(i) - result.x(j));
      }
      // Drop every constrained column pinned at zero by the curtailed step.
      for (int j = 0; j < n_constrained; ++j)
        if (passive[j] && result.x(j) <= 1e-14 * std::abs(result.x.maxCoeff())) {
          passive[j] = false;
          result.x(j) = 0.0;
        }
      if (blocker >= 0 && passive[blocker]) {
        passive[blocker] = false;  // ensure progress even with scale-tiny x
        result.x(blocker) = 0.0;
      }
      rebuild_list();
    }
    ++result.iterations;
  }

  for (int j = 0; j < n_constrained; ++j) result.at_bound[j] = !passive[j];
  return result;
}

}  // namespace dmet
