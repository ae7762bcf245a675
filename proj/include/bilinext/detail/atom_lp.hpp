#pragma once

#include "bilinext/core.hpp"

#include <vector>

namespace bilinext::detail {

/// min sum_j |lambda_j|  subject to  sum_j lambda_j a_j = target
///
/// Dense revised simplex over split variables lambda_j = l+_j - l-_j >= 0. Columns can be
/// appended between solves; the previous optimal basis stays primal feasible, so each solve
/// resumes from it. The first `target.size()` columns added must be linearly independent.
class AtomLp {
 public:
  explicit AtomLp(Vec target);

  int add_column(Vec column);
  std::size_t columns() const { return cols_.size(); }
  int rows() const { return static_cast<int>(target_.size()); }

  /// Runs primal simplex from the current basis. Returns false if the pivot budget ran out;
  /// the basis is still a valid (suboptimal) decomposition.
  bool solve();
  bool optimal() const { return optimal_; }
  /// Continues pivoting against the exact target until the cost stops improving. Only ever
  /// lowers value(); the duals afterwards carry no optimality guarantee.
  void polish();

  /// Cost sum_j |lambda_j| of the current basis solved against the exact target.
  double value() const { return value_; }
  /// Dual vector y with |y . a_j| <= 1 on every column at optimality.
  const Vec& duals() const { return duals_; }
  /// Signed weight of each column in the current basic solution.
  Vec weights() const;
  /// Columns currently carrying weight above `eps`.
  std::vector<int> support(double eps = 0.0) const;

  /// Drop nonbasic columns, keeping at most `keep` with the smallest reduced cost. Returns
  /// the previous index of every surviving column, in their new order.
  std::vector<std::size_t> prune(std::size_t keep);

 private:
  void initialize();
  void factor(const Vec& rhs);
  bool run(const Vec& rhs, bool stop_on_stall);

  Vec target_;
  Vec pivot_target_;
  std::vector<Vec> cols_;
  std::vector<int> basis_;  // variable ids: 2*col + (0 plus, 1 minus)
  Vec x_basic_;
  Vec x_exact_;
  Vec duals_;
  double value_ = 0.0;
  bool initialized_ = false;
  bool optimal_ = false;
  Eigen::PartialPivLU<Mat> lu_;
};

}  // namespace bilinext::detail
