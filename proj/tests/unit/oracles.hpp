#pragma once

// Reference values computed without the library's optimizers.

#include "bilinext/core.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

namespace oracle {

using bilinext::Mat;
using bilinext::Vec;

inline Vec gram_sqrt_eigenvalues(const Mat& c) {
  const Mat g = c.cols() <= c.rows() ? Mat(c.transpose() * c) : Mat(c * c.transpose());
  Vec ev = Eigen::SelfAdjointEigenSolver<Mat>(g, Eigen::EigenvaluesOnly).eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(0.0, ev(i)));
  return ev;
}

inline double spectral(const Mat& c) { return gram_sqrt_eigenvalues(c).maxCoeff(); }
inline double nuclear(const Mat& c) { return gram_sqrt_eigenvalues(c).sum(); }

/// All 2^n vectors with entries +-1.
inline std::vector<Vec> sign_vectors(int n) {
  std::vector<Vec> out;
  for (long mask = 0; mask < (1L << n); ++mask) {
    Vec s(n);
    for (int i = 0; i < n; ++i) s(i) = (mask >> i) & 1 ? 1.0 : -1.0;
    out.push_back(s);
  }
  return out;
}

/// max over sign vectors s, t of s^T C t: the norm of C as a form on l_inf x l_inf.
inline double inf_inf_form_norm(const Mat& c) {
  double best = 0.0;
  for (const Vec& s : sign_vectors(static_cast<int>(c.rows()))) best = std::max(best, (s.transpose() * c).cwiseAbs().sum());
  return best;
}

inline double lp(const Vec& v, double p) {
  if (std::isinf(p)) return v.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)), p);
  return std::pow(s, 1.0 / p);
}

inline double relative(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

}  // namespace oracle
