#include "bilinext/linear_map.hpp"

#include "bilinext/detail/solvers.hpp"

#include <cmath>

namespace bilinext {

using detail::Body;

LinearMap::LinearMap(Space domain, Space codomain, Mat matrix)
    : domain_(std::move(domain)), codomain_(std::move(codomain)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != codomain_.dim() || matrix_.cols() != domain_.dim())
    throw InputError("linear map matrix shape does not match its spaces");
}

Vec LinearMap::apply(const Vec& v) const {
  if (v.size() != domain_.dim()) throw InputError("vector does not belong to the map's domain");
  return matrix_ * v;
}

LinearMap LinearMap::compose(const LinearMap& other) const {
  if (!other.codomain_.same_as(domain_)) throw InputError("composition of incompatible maps");
  return LinearMap(other.domain_, codomain_, matrix_ * other.matrix_);
}

LinearMap LinearMap::identity(const Space& s) {
  return LinearMap(s, s, Mat::Identity(s.dim(), s.dim()));
}

NormEstimate estimate_operator_norm(const LinearMap& map, const OptimizerConfig& cfg) {
  cfg.validate();
  const Body u = Body::polar(map.codomain());
  const Body v = Body::primal(map.domain());
  const detail::FormMax r =
      detail::maximize_form(map.matrix(), u, v, cfg, detail::public_route(cfg));
  return {std::max(r.value, 0.0), r.exact, r.converged, r.agreeing, r.v};
}

double operator_norm(const LinearMap& map, const OptimizerConfig& cfg) {
  return estimate_operator_norm(map, cfg).value;
}

double dual_norm(const Space& space, const LinearMap& f) {
  if (f.codomain().dim() != 1) throw InputError("a functional must have codomain dimension 1");
  if (!f.domain().same_as(space)) throw InputError("functional is not defined on this space");
  return Body::primal(space).support(f.matrix().row(0).transpose()).value;
}

namespace {

constexpr double kProjTol = 1e-10;

int numerical_rank(const Mat& m) {
  const Vec s = Eigen::JacobiSVD<Mat>(m).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > kProjTol * s(0)) ++r;
  return r;
}

}  // namespace

Projection::Projection(LinearMap map, Subspace range) : map_(std::move(map)), range_(std::move(range)) {
  const Space ambient(range_.ambient());
  if (!map_.domain().same_as(ambient) || !map_.codomain().same_as(ambient))
    throw InputError("a projection must act on the ambient space of its range");
  const Mat& e = map_.matrix();
  const double scale = std::max(1.0, e.norm());
  if ((e * e - e).norm() > kProjTol * scale * scale) throw InputError("matrix is not idempotent");
  const Mat& b = range_.basis();
  if ((e * b - b).norm() > kProjTol * scale || numerical_rank(e) != range_.k())
    throw InputError("projection range does not match the given subspace");
}

Projection orthogonal_projection(const Subspace& sub) {
  if (!sub.ambient().p().is_two())
    throw UnsupportedError("orthogonal projection requires p = 2; use min_norm_projection");
  const Mat& b = sub.basis();
  return Projection(LinearMap(sub.ambient(), sub.ambient(), b * b.transpose()), sub);
}

Projection projection_onto(const Subspace& sub, const Subspace& complement) {
  if (!(sub.ambient() == complement.ambient()))
    throw InputError("subspace and complement live in different spaces");
  const int n = sub.ambient().dim();
  if (sub.k() + complement.k() != n)
    throw InputError("subspace and complement dimensions must sum to the ambient dimension");
  Mat joined(n, n);
  joined << sub.basis(), complement.basis();
  if (numerical_rank(joined) < n) throw InputError("subspace and complement intersect nontrivially");
  Mat head = Mat::Zero(n, n);
  head.leftCols(sub.k()) = sub.basis();
  const Mat e = head * joined.inverse();
  return Projection(LinearMap(sub.ambient(), sub.ambient(), e), sub);
}

MinNormProjection min_norm_projection(const Subspace& sub, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = sub.ambient().dim();
  const int k = sub.k();
  if (k >= n) throw InputError("min_norm_projection needs 1 <= k < ambient dimension");
  const Mat& b = sub.basis();
  const Mat perp = orthogonal_complement(sub).basis();
  const Space amb(sub.ambient());
  const Body u = Body::polar(amb);
  const Body v = Body::primal(amb);

  // E(W) = B B^T - B W P^T, P an orthonormal basis of the orthogonal complement.
  const auto build = [&](const Mat& w) -> Mat {
    return b * b.transpose() - b * w * perp.transpose();
  };
  const auto evaluate = [&](const Mat& w) {
    return detail::maximize_form(build(w), u, v, cfg, detail::Route::kAuto);
  };

  Mat best_w = Mat::Zero(k, n - k);
  double best = evaluate(best_w).value;
  if (!sub.ambient().p().is_two()) {
    const int starts = std::min(cfg.restarts, 4);
    const int steps = std::min(cfg.max_iters, 300);
    for (int s = 0; s < starts; ++s) {
      Rng rng(mix_seed(cfg.seed, 1000 + static_cast<std::uint64_t>(s)));
      Mat w = s == 0 ? Mat(Mat::Zero(k, n - k)) : Mat(0.5 * gaussian_matrix(rng, k, n - k));
      for (int t = 0; t < steps; ++t) {
        const detail::FormMax r = evaluate(w);
        if (r.value < best) {
          best = r.value;
          best_w = w;
        }
        // Subgradient of ||E(W)|| at W: -(B^T u*)(P^T v*)^T.
        const Mat g = -(b.transpose() * r.u) * (perp.transpose() * r.v).transpose();
        const double gn = g.norm();
        if (gn == 0.0) break;
        w -= (0.5 / std::sqrt(t + 1.0)) * g / gn;
      }
    }
  }
  Projection proj(LinearMap(sub.ambient(), sub.ambient(), build(best_w)), sub);
  return {std::move(proj), best};
}

}  // namespace bilinext
