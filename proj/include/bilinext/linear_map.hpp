#pragma once

#include "bilinext/space.hpp"

namespace bilinext {

/// A matrix acting between coordinate spaces: rows index codomain coordinates.
class LinearMap {
 public:
  LinearMap(Space domain, Space codomain, Mat matrix);

  const Space& domain() const { return domain_; }
  const Space& codomain() const { return codomain_; }
  const Mat& matrix() const { return matrix_; }

  Vec apply(const Vec& v) const;
  /// this after other (other's codomain must match this domain).
  LinearMap compose(const LinearMap& other) const;

  static LinearMap identity(const Space& s);

 private:
  Space domain_;
  Space codomain_;
  Mat matrix_;
};

/// An operator-norm value with how it was obtained.
struct NormEstimate {
  double value = 0.0;
  bool exact = false;   ///< a closed-form or enumeration route confirmed the value
  int converged = 0;    ///< ascent restarts that met the stagnation test
  int agreeing = 0;     ///< ascent restarts that reached the best value (1e-6 relative)
  Vec argmax;           ///< a domain unit vector attaining the value
};

/// sup_{||v|| <= 1} ||A v|| by alternating ascent with random restarts; polyhedral and
/// Euclidean cases are cross-checked against an exact route.
NormEstimate estimate_operator_norm(const LinearMap& map, const OptimizerConfig& cfg);
double operator_norm(const LinearMap& map, const OptimizerConfig& cfg);

/// Norm of a functional f (codomain dimension 1) in the dual of `space`.
double dual_norm(const Space& space, const LinearMap& f);

/// Bounded idempotent on a NormedSpace whose range is `range`.
class Projection {
 public:
  /// Checks idempotency and that the column space equals `range` (tolerance 1e-10).
  Projection(LinearMap map, Subspace range);

  const LinearMap& map() const { return map_; }
  const Mat& matrix() const { return map_.matrix(); }
  const Subspace& range() const { return range_; }

 private:
  LinearMap map_;
  Subspace range_;
};

/// basis * basis^T; only defined on l2.
Projection orthogonal_projection(const Subspace& sub);

/// The idempotent with range `sub` and kernel `complement`.
Projection projection_onto(const Subspace& sub, const Subspace& complement);

/// Heuristic search for a projection onto `sub` of least operator norm. The kernel is
/// parametrized as the graph of a linear map over the orthogonal complement, which makes the
/// projection affine in the parameters, and the (convex) norm is decreased by subgradient
/// steps from the orthogonal projection.
struct MinNormProjection {
  Projection projection;
  double norm;
};
MinNormProjection min_norm_projection(const Subspace& sub, const OptimizerConfig& cfg);

}  // namespace bilinext
