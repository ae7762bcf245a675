#include "bilinext/space.hpp"

#include <cmath>

namespace bilinext {

namespace {

constexpr double kOrthoTol = 1e-12;
constexpr double kRankTol = 1e-10;

}  // namespace

NormedSpace::NormedSpace(int dim, LpExponent p) : dim_(dim), p_(p) {
  if (dim < 1) throw InputError("space dimension must be >= 1");
}

Subspace::Subspace(NormedSpace ambient, Mat basis) : ambient_(ambient), basis_(std::move(basis)) {
  if (basis_.rows() != ambient_.dim())
    throw InputError("subspace basis rows must match the ambient dimension");
  if (basis_.cols() < 1) throw InputError("subspace must have dimension >= 1");
  const Mat gram = basis_.transpose() * basis_;
  const Mat id = Mat::Identity(basis_.cols(), basis_.cols());
  if ((gram - id).cwiseAbs().maxCoeff() > kOrthoTol)
    throw InputError("subspace basis is not orthonormal");
}

double Subspace::residual(const Vec& v) const {
  if (v.size() != ambient_.dim()) throw InputError("vector does not belong to the ambient space");
  return (v - basis_ * (basis_.transpose() * v)).norm();
}

double Subspace::principal_gap(const Subspace& other) const {
  if (other.ambient_.dim() != ambient_.dim() || other.k() != k()) return 1.0;
  const Mat diff = basis_ * basis_.transpose() - other.basis_ * other.basis_.transpose();
  return Eigen::JacobiSVD<Mat>(diff).singularValues()(0);
}

Subspace make_subspace(const NormedSpace& ambient, std::span<const Vec> spanning) {
  if (spanning.empty()) throw InputError("spanning set must be nonempty");
  double scale = 0.0;
  for (const Vec& v : spanning) {
    if (v.size() != ambient.dim()) throw InputError("spanning vector has wrong dimension");
    scale = std::max(scale, v.norm());
  }
  if (scale == 0.0) throw InputError("spanning set is all zero; subspaces must be nonzero");

  std::vector<Vec> kept;
  for (const Vec& v : spanning) {
    Vec w = v;
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& q : kept) w -= q.dot(w) * q;
    const double r = w.norm();
    if (r <= kRankTol * scale) continue;
    kept.push_back(w / r);
  }
  Mat basis(ambient.dim(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t c = 0; c < kept.size(); ++c) {
    Vec q = kept[c];
    // Fix the sign: first non-negligible coordinate positive.
    for (Eigen::Index i = 0; i < q.size(); ++i) {
      if (std::abs(q(i)) > kRankTol) {
        if (q(i) < 0) q = -q;
        break;
      }
    }
    basis.col(static_cast<Eigen::Index>(c)) = q;
  }
  return Subspace(ambient, std::move(basis));
}

Subspace make_subspace(const NormedSpace& ambient, const std::vector<Vec>& spanning) {
  return make_subspace(ambient, std::span<const Vec>(spanning.data(), spanning.size()));
}

Subspace whole_space(const NormedSpace& space) {
  return Subspace(space, Mat::Identity(space.dim(), space.dim()));
}

Subspace orthogonal_complement(const Subspace& sub) {
  const int n = sub.ambient().dim();
  if (sub.k() >= n) throw InputError("the whole space has no nonzero complement");
  std::vector<Vec> spanning(sub.basis().colwise().begin(), sub.basis().colwise().end());
  for (int i = 0; i < n; ++i) spanning.push_back(Vec::Unit(n, i));
  Subspace full = make_subspace(sub.ambient(), spanning);
  return Subspace(sub.ambient(), full.basis().rightCols(n - sub.k()));
}

Space::Space(const NormedSpace& s)
    : ambient_(s), basis_(Mat::Identity(s.dim(), s.dim())), is_ambient_(true) {}

Space::Space(const Subspace& s) : ambient_(s.ambient()), basis_(s.basis()), is_ambient_(false) {
  if (s.k() == s.ambient().dim() && basis_.isApprox(Mat::Identity(s.k(), s.k()), 1e-14))
    is_ambient_ = true;
}

double Space::norm(const Vec& coords) const {
  if (coords.size() != dim()) throw InputError("coordinate vector has wrong dimension");
  return is_ambient_ ? lp_norm(coords, p()) : lp_norm(basis_ * coords, p());
}

bool Space::same_as(const Space& other) const {
  return ambient_ == other.ambient_ && basis_.rows() == other.basis_.rows() &&
         basis_.cols() == other.basis_.cols() &&
         (basis_ - other.basis_).cwiseAbs().maxCoeff() <= 1e-10;
}

double lp_norm(const Vec& v, LpExponent p) {
  if (v.size() == 0) return 0.0;
  if (p.is_inf()) return v.cwiseAbs().maxCoeff();
  if (p.is_one()) return v.cwiseAbs().sum();
  if (p.is_two()) return v.norm();
  const double m = v.cwiseAbs().maxCoeff();
  if (m == 0.0) return 0.0;
  const double q = p.value();
  double s = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) s += std::pow(std::abs(v(i)) / m, q);
  return m * std::pow(s, 1.0 / q);
}

double vector_norm(const NormedSpace& space, const Vec& v) {
  if (v.size() != space.dim()) throw InputError("vector dimension does not match the space");
  return lp_norm(v, space.p());
}

Vec norming_vector(const Vec& x, LpExponent p) {
  const Eigen::Index n = x.size();
  Vec z = Vec::Zero(n);
  if (n == 0) return z;
  if (p.is_one()) {
    for (Eigen::Index i = 0; i < n; ++i) z(i) = x(i) < 0 ? -1.0 : 1.0;
    return z;
  }
  Eigen::Index imax = 0;
  const double m = x.cwiseAbs().maxCoeff(&imax);
  if (m == 0.0) {
    z(0) = 1.0;
    return z;
  }
  if (p.is_inf()) {
    z(imax) = x(imax) < 0 ? -1.0 : 1.0;
    return z;
  }
  if (p.is_two()) return x / x.norm();
  const double e = p.value() - 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double t = std::pow(std::abs(x(i)) / m, e);
    z(i) = x(i) < 0 ? -t : t;
  }
  return z / lp_norm(z, p.conjugate());
}

}  // namespace bilinext
