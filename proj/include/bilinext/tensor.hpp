#pragma once

#include "bilinext/bilinear_map.hpp"

#include <span>
#include <utility>
#include <vector>

namespace bilinext {

/// A finite sum of single tensors x_i (x) y_i together with its coefficient matrix
/// sum_i x_i y_i^T. Equality is equality of coefficient matrices.
class TensorElement {
 public:
  using Term = std::pair<Vec, Vec>;

  TensorElement(Space x, Space y, std::vector<Term> terms);
  /// Decomposes `coeff` by rows: sum_i e_i (x) coeff.row(i).
  static TensorElement from_matrix(Space x, Space y, const Mat& coeff);

  const Space& x() const { return x_; }
  const Space& y() const { return y_; }
  const std::vector<Term>& terms() const { return terms_; }
  const Mat& coeff_matrix() const { return coeff_; }

  bool equals(const TensorElement& other, double tol = 1e-12) const;

 private:
  Space x_;
  Space y_;
  std::vector<Term> terms_;
  Mat coeff_;
};

TensorElement single_tensor(const Space& x, const Space& y, const Vec& u, const Vec& v);

/// Row-major pairing (i, j) -> i * y_dim + j of the tensor coordinate space.
inline int tensor_index(int i, int j, int y_dim) { return i * y_dim + j; }
Vec tensor_coordinates(const Mat& coeff);

/// sup over dual unit balls of |f^T C g|.
NormEstimate estimate_injective_norm(const TensorElement& t, const OptimizerConfig& cfg);
double injective_norm(const TensorElement& t, const OptimizerConfig& cfg);

/// weight * x (x) y with ||x|| = ||y|| = 1 and weight >= 0.
struct Atom {
  double weight = 0.0;
  Vec x;
  Vec y;
};

/// Output of the column-generation solve for the projective norm.
///  - `upper` is the cost of `decomposition`, an exact decomposition of the element.
///  - `lower` is <A, C> / ||A|| for the LP dual matrix `certificate`, a bilinear form.
///  - `exact_pricing` records whether ||A|| came from an exact route (otherwise the lower
///    bound rests on an ascent estimate).
struct ProjectiveBounds {
  double upper = 0.0;
  double lower = 0.0;
  std::vector<Atom> decomposition;
  Mat certificate;
  int rounds = 0;
  bool exact_pricing = true;
};

/// `seeds` are extra atoms offered to the master problem before the first solve.
ProjectiveBounds projective_bounds(const TensorElement& t, const OptimizerConfig& cfg,
                                   std::span<const Atom> seeds = {});

/// inf over decompositions with at most k terms of sum ||x_i|| ||y_i|| (an upper bound on the
/// projective norm). k must be at least the rank of the coefficient matrix.
double projective_norm_upper(const TensorElement& t, int k, const OptimizerConfig& cfg);

/// sup over bilinear forms of norm <= 1 of |sum_i phi(x_i, y_i)| (a lower bound).
double projective_norm_dual_lower(const TensorElement& t, const OptimizerConfig& cfg);

struct CrossnormReport {
  double injective = 0.0;
  double projective_upper = 0.0;
  double projective_dual_lower = 0.0;
  double gap = 0.0;  ///< relative gap between the projective bounds
  bool certified = false;
  int rounds = 0;
  int restarts = 0;
  std::uint64_t seed = 0;
};

inline constexpr double kCertifyGap = 1e-4;

CrossnormReport projective_norm(const TensorElement& t, const OptimizerConfig& cfg);

/// The linear map on the tensor coordinate space induced by a bilinear map:
/// Phi(x (x) y) = phi(x, y). Matrix is Z.dim x (X.dim * Y.dim), row-major pairing.
class LinearizedMap {
 public:
  LinearizedMap(Space x, Space y, Space z, Mat matrix);

  const Space& x() const { return x_; }
  const Space& y() const { return y_; }
  const Space& z() const { return z_; }
  const Mat& matrix() const { return matrix_; }

  Vec apply(const TensorElement& t) const;

 private:
  Space x_;
  Space y_;
  Space z_;
  Mat matrix_;
};

LinearizedMap linearize(const BilinearMap& phi);
/// phi(u, v) = Phi(u (x) v).
BilinearMap delinearize(const LinearizedMap& map);

/// sup over the projective unit ball of ||Phi(F)||_Z, computed as a sup over the dual ball of
/// Z of the dual projective norm (the norm of the bilinear form <w, Phi(. (x) .)>).
NormEstimate estimate_projective_operator_norm(const LinearizedMap& map, const OptimizerConfig& cfg);
double projective_operator_norm(const LinearizedMap& map, const OptimizerConfig& cfg);

/// Projective norm of an element of M (x) N computed with the inherited norms of M and N,
/// and in the ambient X (x) Y.
struct EmbeddedNorms {
  double subspace_norm = 0.0;
  double ambient_norm = 0.0;
  double subspace_lower = 0.0;
  double ambient_lower = 0.0;
};

EmbeddedNorms embedded_projective_norms(const TensorElement& t, const Subspace& m,
                                        const Subspace& n, const OptimizerConfig& cfg);

/// Sampled (necessary) check that M (x)_pi N sits isometrically in X (x)_pi Y.
struct EmbeddingVerdict {
  bool equal = false;
  double worst_gap = 0.0;  ///< max relative (subspace - ambient) over the samples
  double worst_violation = 0.0;  ///< max (ambient - subspace); positive breaks monotonicity
  int samples = 0;
  double tolerance = 0.0;
};

EmbeddingVerdict is_subspace_embedding(const Subspace& m, const Subspace& n, int samples,
                                       const OptimizerConfig& cfg, double tol = kCertifyGap);

/// Random element of M (x) N (ambient coordinates), coordinates i.i.d. standard normal.
TensorElement random_element_in(const Subspace& m, const Subspace& n, Rng& rng);

}  // namespace bilinext
