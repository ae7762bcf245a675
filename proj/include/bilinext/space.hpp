#pragma once

#include "bilinext/core.hpp"

#include <span>
#include <vector>

namespace bilinext {

/// The coordinate space R^dim with the lp norm.
class NormedSpace {
 public:
  NormedSpace(int dim, LpExponent p);
  NormedSpace(int dim, double p) : NormedSpace(dim, LpExponent(p)) {}

  int dim() const { return dim_; }
  LpExponent p() const { return p_; }

  friend bool operator==(const NormedSpace&, const NormedSpace&) = default;

 private:
  int dim_;
  LpExponent p_;
};

/// Linear manifold of an ambient NormedSpace. The basis columns are orthonormal in the
/// Euclidean inner product; the norm is always the one inherited from the ambient space.
class Subspace {
 public:
  /// `basis` must already be orthonormal (checked to 1e-12). Use make_subspace otherwise.
  Subspace(NormedSpace ambient, Mat basis);

  const NormedSpace& ambient() const { return ambient_; }
  const Mat& basis() const { return basis_; }
  int k() const { return static_cast<int>(basis_.cols()); }

  /// Coordinates of an ambient vector lying in the subspace.
  Vec coords(const Vec& v) const { return basis_.transpose() * v; }
  /// Distance of an ambient vector from the subspace (Euclidean).
  double residual(const Vec& v) const;
  /// Sine of the largest principal angle to another subspace of equal dimension.
  double principal_gap(const Subspace& other) const;

 private:
  NormedSpace ambient_;
  Mat basis_;
};

/// Orthonormalize `spanning` (modified Gram-Schmidt, twice) and drop dependent vectors
/// at rank tolerance 1e-10.
Subspace make_subspace(const NormedSpace& ambient, std::span<const Vec> spanning);
Subspace make_subspace(const NormedSpace& ambient, const std::vector<Vec>& spanning);

/// Whole-space subspace with the identity basis.
Subspace whole_space(const NormedSpace& space);

/// Orthogonal complement of a subspace (Euclidean), as a Subspace of the same ambient.
/// Throws InputError when `sub` is the whole space.
Subspace orthogonal_complement(const Subspace& sub);

/// A coordinate space on which maps act: either lp^n itself or a subspace of it with the
/// inherited norm. Coordinates a represent the ambient vector basis() * a.
class Space {
 public:
  Space(const NormedSpace& s);  // NOLINT(google-explicit-constructor)
  Space(const Subspace& s);     // NOLINT(google-explicit-constructor)

  int dim() const { return static_cast<int>(basis_.cols()); }
  int ambient_dim() const { return ambient_.dim(); }
  const NormedSpace& ambient() const { return ambient_; }
  LpExponent p() const { return ambient_.p(); }
  const Mat& basis() const { return basis_; }
  bool is_ambient() const { return is_ambient_; }
  /// True when coordinates are isometric to Euclidean space (p = 2 with orthonormal basis).
  bool is_euclidean() const { return ambient_.p().is_two(); }

  double norm(const Vec& coords) const;
  Vec embed(const Vec& coords) const { return is_ambient_ ? coords : Vec(basis_ * coords); }

  /// Same space: equal ambient and equal span with identical coordinates.
  bool same_as(const Space& other) const;

 private:
  NormedSpace ambient_;
  Mat basis_;
  bool is_ambient_;
};

double lp_norm(const Vec& v, LpExponent p);

/// lp norm of v in `space`. Throws InputError on dimension mismatch.
double vector_norm(const NormedSpace& space, const Vec& v);

/// z with ||z||_q <= 1 and <z, x> = ||x||_p (q the conjugate of p). Ties go to the lowest
/// index; zero coordinates map to +1 on the l1 side.
Vec norming_vector(const Vec& x, LpExponent p);

}  // namespace bilinext
