#include "bilinext/bilinear_map.hpp"

#include "bilinext/detail/solvers.hpp"

#include <cmath>

namespace bilinext {

using detail::Body;

BilinearMap::BilinearMap(Space x, Space y, Space z, std::vector<Mat> slices)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), slices_(std::move(slices)) {
  if (static_cast<int>(slices_.size()) != z_.dim())
    throw InputError("bilinear map needs one coefficient slice per Z coordinate");
  for (const Mat& s : slices_)
    if (s.rows() != x_.dim() || s.cols() != y_.dim())
      throw InputError("bilinear coefficient slice has the wrong shape");
}

BilinearMap BilinearMap::zero(const Space& x, const Space& y, const Space& z) {
  return BilinearMap(x, y, z,
                     std::vector<Mat>(static_cast<std::size_t>(z.dim()), Mat::Zero(x.dim(), y.dim())));
}

Vec BilinearMap::eval(const Vec& x, const Vec& y) const {
  if (x.size() != x_.dim() || y.size() != y_.dim())
    throw InputError("bilinear map evaluated at vectors of the wrong dimension");
  return detail::contract_xy(slices_, x, y);
}

double BilinearMap::distance(const BilinearMap& other) const {
  if (other.slices_.size() != slices_.size()) throw InputError("bilinear maps differ in shape");
  double d = 0.0;
  for (std::size_t k = 0; k < slices_.size(); ++k) {
    if (slices_[k].rows() != other.slices_[k].rows() || slices_[k].cols() != other.slices_[k].cols())
      throw InputError("bilinear maps differ in shape");
    d = std::max(d, (slices_[k] - other.slices_[k]).cwiseAbs().maxCoeff());
  }
  return d;
}

LinearMap section_y(const BilinearMap& phi, const Vec& y) {
  if (y.size() != phi.y().dim()) throw InputError("section point has the wrong dimension");
  Mat m(phi.z().dim(), phi.x().dim());
  for (int k = 0; k < phi.z().dim(); ++k) m.row(k) = (phi.slices()[static_cast<std::size_t>(k)] * y).transpose();
  return LinearMap(phi.x(), phi.z(), std::move(m));
}

LinearMap section_x(const BilinearMap& phi, const Vec& x) {
  if (x.size() != phi.x().dim()) throw InputError("section point has the wrong dimension");
  Mat m(phi.z().dim(), phi.y().dim());
  for (int k = 0; k < phi.z().dim(); ++k) m.row(k) = x.transpose() * phi.slices()[static_cast<std::size_t>(k)];
  return LinearMap(phi.y(), phi.z(), std::move(m));
}

BilinearNormEstimate estimate_bilinear_norm(const BilinearMap& phi, const OptimizerConfig& cfg) {
  cfg.validate();
  const Body bx = Body::primal(phi.x());
  const Body by = Body::primal(phi.y());
  const Body bw = Body::polar(phi.z());
  const detail::TriMax r =
      detail::maximize_trilinear(phi.slices(), bx, by, bw, cfg, detail::public_route(cfg));
  return {std::max(r.value, 0.0), r.exact, r.converged, r.agreeing, r.x, r.y};
}

double bilinear_norm(const BilinearMap& phi, const OptimizerConfig& cfg) {
  return estimate_bilinear_norm(phi, cfg).value;
}

BilinearMap rank_one_bilinear(const LinearMap& g, const LinearMap& t) {
  if (g.codomain().dim() != 1) throw InputError("g must be a functional");
  if (g.matrix().isZero(0.0) || t.matrix().isZero(0.0))
    throw InputError("rank-one construction requires nonzero g and T");
  // phi(u, v) = g(v) T(u): slice k = T_k^T g, an outer product over (u, v).
  std::vector<Mat> slices;
  const Vec grow = g.matrix().row(0).transpose();
  for (int k = 0; k < t.codomain().dim(); ++k)
    slices.push_back(t.matrix().row(k).transpose() * grow.transpose());
  return BilinearMap(t.domain(), g.domain(), t.codomain(), std::move(slices));
}

CurriedMap::CurriedMap(Space x, Space y, Space z, std::vector<Mat> images)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), images_(std::move(images)) {
  if (static_cast<int>(images_.size()) != x_.dim()) throw InputError("curried map needs one image per X coordinate");
  for (const Mat& m : images_)
    if (m.rows() != z_.dim() || m.cols() != y_.dim()) throw InputError("curried image has the wrong shape");
}

LinearMap CurriedMap::apply(const Vec& u) const {
  if (u.size() != x_.dim()) throw InputError("curried map applied to a vector of the wrong dimension");
  Mat m = Mat::Zero(z_.dim(), y_.dim());
  for (int i = 0; i < x_.dim(); ++i) m += u(i) * images_[static_cast<std::size_t>(i)];
  return LinearMap(y_, z_, std::move(m));
}

CurriedMap curry(const BilinearMap& phi) {
  std::vector<Mat> images;
  for (int i = 0; i < phi.x().dim(); ++i) images.push_back(section_x(phi, Vec::Unit(phi.x().dim(), i)).matrix());
  return CurriedMap(phi.x(), phi.y(), phi.z(), std::move(images));
}

BilinearMap uncurry(const CurriedMap& t) {
  std::vector<Mat> slices(static_cast<std::size_t>(t.z().dim()), Mat(t.x().dim(), t.y().dim()));
  for (int i = 0; i < t.x().dim(); ++i)
    for (int k = 0; k < t.z().dim(); ++k)
      slices[static_cast<std::size_t>(k)].row(i) = t.images()[static_cast<std::size_t>(i)].row(k);
  return BilinearMap(t.x(), t.y(), t.z(), std::move(slices));
}

NormEstimate estimate_curried_norm(const CurriedMap& t, const OptimizerConfig& cfg) {
  cfg.validate();
  const Body bx = Body::primal(t.x());
  const Body inner_u = Body::polar(t.z());
  const Body inner_v = Body::primal(t.y());

  const auto inner = [&](const Vec& u) {
    return detail::maximize_form(t.apply(u).matrix(), inner_u, inner_v, cfg, detail::Route::kAuto);
  };
  const bool inner_exact = detail::has_exact_form_route(inner_u, inner_v);

  NormEstimate best;
  best.value = -1.0;
  std::vector<double> values;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    Vec u = bx.random_point(rng);
    double prev = -1.0;
    double value = 0.0;
    bool done = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const detail::FormMax f = inner(u);
      value = f.value;
      if (it > 0 && value - prev <= cfg.tol * std::max(1.0, value)) {
        done = true;
        break;
      }
      prev = value;
      // Subgradient of u -> ||T(u)|| at u: g_i = w*^T T(e_i) y*.
      Vec g(t.x().dim());
      for (int i = 0; i < t.x().dim(); ++i) g(i) = f.u.dot(t.images()[static_cast<std::size_t>(i)] * f.v);
      u = bx.support(g).point;
    }
    best.converged += done ? 1 : 0;
    values.push_back(value);
    if (value > best.value) {
      best.value = value;
      best.argmax = u;
    }
  }
  for (double v : values)
    if (v >= best.value - 1e-6 * std::max(1.0, best.value)) ++best.agreeing;

  if (cfg.exact_routes && inner_exact && bx.vertices() != nullptr) {
    best.exact = true;
    for (const Vec& cand : *bx.vertices()) {
      const double v = inner(cand).value;
      if (v > best.value) {
        best.value = v;
        best.argmax = cand;
      }
    }
  }
  if (!best.exact && best.converged == 0)
    throw ConvergenceError("curried-norm ascent did not converge in any restart", best.value);
  best.value = std::max(best.value, 0.0);
  return best;
}

double operator_norm(const CurriedMap& t, const OptimizerConfig& cfg) {
  return estimate_curried_norm(t, cfg).value;
}

}  // namespace bilinext
