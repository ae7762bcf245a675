#include "bilinext/detail/atom_lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bilinext::detail {

namespace {

constexpr double kReducedCostTol = 1e-11;
constexpr double kPivotTol = 1e-11;
constexpr double kRelativePivotTol = 1e-9;
constexpr double kPerturbation = 1e-9;
constexpr double kHarrisSlack = 1e-12;
constexpr double kProgressTol = 1e-15;
constexpr int kStallBeforeBland = 30;
constexpr int kPolishStall = 200;

}  // namespace

AtomLp::AtomLp(Vec target) : target_(std::move(target)) {
  if (target_.size() == 0) throw InputError("LP target must be nonempty");
  // Pivoting runs against a slightly perturbed target so that degenerate vertices (the rule
  // for smooth norms, where the optimal face is large) do not stall the simplex.
  Rng rng(0x5eedULL);
  std::uniform_real_distribution<double> u(1.0, 2.0);
  const double scale = kPerturbation * std::max(1.0, target_.cwiseAbs().maxCoeff());
  pivot_target_ = target_;
  for (Eigen::Index i = 0; i < pivot_target_.size(); ++i) pivot_target_(i) += scale * u(rng);
}

int AtomLp::add_column(Vec column) {
  if (column.size() != target_.size()) throw InputError("LP column has the wrong length");
  cols_.push_back(std::move(column));
  return static_cast<int>(cols_.size()) - 1;
}

void AtomLp::factor(const Vec& rhs) {
  const int r = rows();
  Mat b(r, r);
  for (int pass = 0; pass < 2; ++pass) {
    for (int i = 0; i < r; ++i) {
      const int var = basis_[static_cast<std::size_t>(i)];
      const double sign = (var & 1) ? -1.0 : 1.0;
      b.col(i) = sign * cols_[static_cast<std::size_t>(var >> 1)];
    }
    lu_.compute(b);
    x_basic_ = lu_.solve(rhs);
    // Any basis is feasible up to signs: a negative weight moves to the twin variable.
    bool flipped = false;
    for (int i = 0; i < r; ++i) {
      if (x_basic_(i) < 0.0) {
        basis_[static_cast<std::size_t>(i)] ^= 1;
        flipped = true;
      }
    }
    if (!flipped) break;
  }
  x_basic_ = x_basic_.cwiseAbs();
  duals_ = lu_.transpose().solve(Vec::Ones(r));
  x_exact_ = lu_.solve(target_);
  value_ = x_exact_.cwiseAbs().sum();
}

void AtomLp::initialize() {
  const int r = rows();
  if (static_cast<int>(cols_.size()) < r) throw InputError("LP needs a starting basis of full rank");
  Mat b(r, r);
  for (int i = 0; i < r; ++i) b.col(i) = cols_[static_cast<std::size_t>(i)];
  Eigen::FullPivLU<Mat> check(b);
  if (check.rank() < r) throw InputError("LP starting columns are linearly dependent");
  basis_.resize(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) basis_[static_cast<std::size_t>(i)] = 2 * i;
  initialized_ = true;
}

bool AtomLp::solve() {
  if (!initialized_) initialize();
  optimal_ = run(pivot_target_, false);
  return optimal_;
}

void AtomLp::polish() {
  if (!initialized_) initialize();
  run(target_, true);
  optimal_ = false;
}

bool AtomLp::run(const Vec& rhs, bool stop_on_stall) {
  const int r = rows();
  factor(rhs);

  std::vector<char> in_basis;
  int stalled = 0;
  bool bland = false;
  double objective = x_basic_.sum();
  const std::size_t cap = 10 * (cols_.size() + static_cast<std::size_t>(r)) + 500;
  const double slack = kHarrisSlack * std::max(1.0, rhs.cwiseAbs().maxCoeff());
  for (std::size_t iter = 0; iter < cap; ++iter) {
    in_basis.assign(2 * cols_.size(), 0);
    for (int v : basis_) in_basis[static_cast<std::size_t>(v)] = 1;

    int entering = -1;
    double best_rc = -kReducedCostTol;
    for (std::size_t j = 0; j < cols_.size() && !(bland && entering >= 0); ++j) {
      const double t = duals_.dot(cols_[j]);
      const double rc[2] = {1.0 - t, 1.0 + t};
      for (int s = 0; s < 2; ++s) {
        const int var = static_cast<int>(2 * j) + s;
        if (in_basis[static_cast<std::size_t>(var)]) continue;
        if (rc[s] < best_rc) {
          best_rc = rc[s];
          entering = var;
          if (bland) break;
        }
      }
    }
    if (entering < 0) return true;

    const double sign = (entering & 1) ? -1.0 : 1.0;
    const Vec d = lu_.solve(sign * cols_[static_cast<std::size_t>(entering >> 1)]);
    const double pivot_tol = std::max(kPivotTol, kRelativePivotTol * d.cwiseAbs().maxCoeff());
    int leave = -1;
    if (bland) {
      // Textbook ratio test, ties to the lowest variable id.
      double best_ratio = 0.0;
      for (int i = 0; i < r; ++i) {
        if (d(i) <= pivot_tol) continue;
        const double ratio = x_basic_(i) / d(i);
        if (leave < 0 || ratio < best_ratio ||
            (ratio == best_ratio && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(leave)])) {
          leave = i;
          best_ratio = ratio;
        }
      }
    } else {
      // Harris two-pass ratio test: among rows within a small slack of the minimum ratio,
      // pivot on the largest entry.
      double theta = std::numeric_limits<double>::infinity();
      for (int i = 0; i < r; ++i)
        if (d(i) > pivot_tol) theta = std::min(theta, (x_basic_(i) + slack) / d(i));
      for (int i = 0; i < r; ++i) {
        if (d(i) <= pivot_tol || x_basic_(i) / d(i) > theta) continue;
        if (leave < 0 || d(i) > d(leave)) leave = i;
      }
    }
    if (leave < 0) throw ConvergenceError("LP is unbounded (numerical breakdown)", value_);
    basis_[static_cast<std::size_t>(leave)] = entering;
    factor(rhs);

    const double next = x_basic_.sum();
    stalled = next < objective - kProgressTol * std::max(1.0, objective) ? 0 : stalled + 1;
    objective = std::min(objective, next);
    if (stop_on_stall && stalled >= kPolishStall) return false;
    if (stalled >= kStallBeforeBland) bland = true;
  }
  return false;
}

Vec AtomLp::weights() const {
  Vec w = Vec::Zero(static_cast<Eigen::Index>(cols_.size()));
  for (std::size_t i = 0; i < basis_.size(); ++i) {
    const int var = basis_[i];
    w(var >> 1) += (var & 1) ? -x_exact_(static_cast<Eigen::Index>(i)) : x_exact_(static_cast<Eigen::Index>(i));
  }
  return w;
}

std::vector<int> AtomLp::support(double eps) const {
  const Vec w = weights();
  std::vector<int> out;
  for (Eigen::Index j = 0; j < w.size(); ++j)
    if (std::abs(w(j)) > eps) out.push_back(static_cast<int>(j));
  return out;
}

std::vector<std::size_t> AtomLp::prune(std::size_t keep) {
  std::vector<std::size_t> order(cols_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!initialized_) return order;
  std::vector<char> basic(cols_.size(), 0);
  for (int v : basis_) basic[static_cast<std::size_t>(v >> 1)] = 1;
  std::vector<std::size_t> nonbasic;
  for (std::size_t j = 0; j < cols_.size(); ++j)
    if (!basic[j]) nonbasic.push_back(j);
  if (nonbasic.size() <= keep) return order;
  std::vector<double> rc(cols_.size());
  for (std::size_t j : nonbasic) rc[j] = 1.0 - std::abs(duals_.dot(cols_[j]));
  std::stable_sort(nonbasic.begin(), nonbasic.end(), [&](std::size_t a, std::size_t b) { return rc[a] < rc[b]; });
  for (std::size_t i = 0; i < keep; ++i) basic[nonbasic[i]] = 1;

  std::vector<int> remap(cols_.size(), -1);
  std::vector<Vec> kept;
  order.clear();
  for (std::size_t j = 0; j < cols_.size(); ++j) {
    if (!basic[j]) continue;
    remap[j] = static_cast<int>(kept.size());
    kept.push_back(std::move(cols_[j]));
    order.push_back(j);
  }
  cols_ = std::move(kept);
  for (int& v : basis_) v = 2 * remap[static_cast<std::size_t>(v >> 1)] + (v & 1);
  return order;
}

}  // namespace bilinext::detail
