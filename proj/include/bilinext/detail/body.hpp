#pragma once

#include "bilinext/space.hpp"

#include <optional>
#include <vector>

namespace bilinext::detail {

struct Support {
  double value = 0.0;
  Vec point;
};

/// Which unit ball of a Space the body is: the ball itself, or its polar (the dual ball,
/// in the same coordinates).
enum class BodyKind { kPrimal, kPolar };

/// Symmetric convex body in coordinates, accessed through its support function
///   h(g) = sup_{u in body} <g, u>
/// and, when it is a polytope of moderate size, a finite generating set of extreme points.
class Body {
 public:
  Body(Space space, BodyKind kind);

  static Body primal(const Space& s) { return Body(s, BodyKind::kPrimal); }
  static Body polar(const Space& s) { return Body(s, BodyKind::kPolar); }

  int dim() const { return space_.dim(); }
  const Space& space() const { return space_; }
  BodyKind kind() const { return kind_; }

  Support support(const Vec& g) const;
  bool euclidean() const { return space_.is_euclidean(); }

  /// Half of a symmetric generating set (the body is the convex hull of +-vertices), or
  /// nullptr when the body is not a polytope or the set would exceed the enumeration cap.
  const std::vector<Vec>* vertices() const;

  /// Extreme point maximizing a random Gaussian direction.
  Vec random_point(Rng& rng) const { return support(gaussian_vector(rng, dim())).point; }

 private:
  std::vector<Vec> enumerate() const;
  Support enumerated_support(const Vec& g) const;

  Space space_;
  BodyKind kind_;
  mutable bool enumerated_ = false;
  mutable std::optional<std::vector<Vec>> vertices_;
};

/// sup {<g,a> : ||B a||_p <= 1} for a smooth exponent p (Newton on the dual problem
/// min ||B a||_p subject to <g,a> = 1). Exposed for tests.
Support smooth_subspace_support(const Mat& basis, LpExponent p, const Vec& g);

/// Upper limit on the size of an enumerated vertex set.
inline constexpr std::size_t kVertexCap = std::size_t{1} << 14;

}  // namespace bilinext::detail
