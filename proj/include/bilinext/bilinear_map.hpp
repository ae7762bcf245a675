#pragma once

#include "bilinext/linear_map.hpp"

#include <vector>

namespace bilinext {

/// phi : X x Y -> Z stored densely: slice k is the X.dim x Y.dim matrix of the k-th
/// output coordinate, so z_k = x^T C_k y.
class BilinearMap {
 public:
  BilinearMap(Space x, Space y, Space z, std::vector<Mat> slices);

  static BilinearMap zero(const Space& x, const Space& y, const Space& z);

  const Space& x() const { return x_; }
  const Space& y() const { return y_; }
  const Space& z() const { return z_; }
  const std::vector<Mat>& slices() const { return slices_; }
  double coeff(int k, int i, int j) const { return slices_[static_cast<std::size_t>(k)](i, j); }

  Vec eval(const Vec& x, const Vec& y) const;

  /// Largest absolute coefficient difference (spaces must agree in shape).
  double distance(const BilinearMap& other) const;

 private:
  Space x_;
  Space y_;
  Space z_;
  std::vector<Mat> slices_;
};

/// The y-section x -> phi(x, y).
LinearMap section_y(const BilinearMap& phi, const Vec& y);
/// The x-section y -> phi(x, y).
LinearMap section_x(const BilinearMap& phi, const Vec& x);

struct BilinearNormEstimate {
  double value = 0.0;
  bool exact = false;
  int converged = 0;
  int agreeing = 0;
  Vec x, y;  ///< a maximizing pair of unit vectors
};

/// sup ||phi(x,y)|| / (||x|| ||y||) by alternating ascent over the unit balls of X, Y and
/// the dual ball of Z, with restarts and exact cross-checks where available.
BilinearNormEstimate estimate_bilinear_norm(const BilinearMap& phi, const OptimizerConfig& cfg);
double bilinear_norm(const BilinearMap& phi, const OptimizerConfig& cfg);

/// (u, v) -> g(v) T(u) on M x N. Both factors must be nonzero.
BilinearMap rank_one_bilinear(const LinearMap& g, const LinearMap& t);

/// A linear map X -> B[Y, Z], stored by the images of the X coordinate vectors.
class CurriedMap {
 public:
  CurriedMap(Space x, Space y, Space z, std::vector<Mat> images);

  const Space& x() const { return x_; }
  const Space& y() const { return y_; }
  const Space& z() const { return z_; }
  /// images()[i] is the Z.dim x Y.dim matrix of T(e_i).
  const std::vector<Mat>& images() const { return images_; }

  LinearMap apply(const Vec& u) const;

 private:
  Space x_;
  Space y_;
  Space z_;
  std::vector<Mat> images_;
};

/// u -> section_x(phi, u).
CurriedMap curry(const BilinearMap& phi);
/// (u, v) -> T(u)(v).
BilinearMap uncurry(const CurriedMap& t);

/// sup_{||u|| <= 1} ||T(u)||_{B[Y,Z]}: outer ascent over the X ball driven by subgradients
/// of the inner operator norm (or vertex enumeration of the X ball), inner operator norms
/// solved independently.
NormEstimate estimate_curried_norm(const CurriedMap& t, const OptimizerConfig& cfg);
double operator_norm(const CurriedMap& t, const OptimizerConfig& cfg);

}  // namespace bilinext
