#include "bilinext/tensor.hpp"

#include "bilinext/detail/atom_lp.hpp"
#include "bilinext/detail/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace bilinext {

using detail::Body;

namespace {

constexpr int kMaxRounds = 400;
constexpr double kTargetGap = 1e-10;
constexpr std::size_t kPruneAt = 4000;
constexpr std::size_t kPruneKeep = 1500;
constexpr double kParallelTol = 1e-10;
constexpr double kSeedResidual = 1e-10;
constexpr std::size_t kNormingCandidates = 8;
constexpr double kSmoothing = 0.5;
constexpr int kQuietRounds = 40;

Mat from_coordinates(const Vec& v, int rows, int cols) {
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(tensor_index(i, j, cols));
  return m;
}

int matrix_rank(const Mat& m) {
  const Vec s = Eigen::JacobiSVD<Mat>(m).singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > 1e-10 * s(0)) ++r;
  return r;
}

}  // namespace

TensorElement::TensorElement(Space x, Space y, std::vector<Term> terms)
    : x_(std::move(x)), y_(std::move(y)), terms_(std::move(terms)), coeff_(Mat::Zero(x_.dim(), y_.dim())) {
  for (const Term& t : terms_) {
    if (t.first.size() != x_.dim() || t.second.size() != y_.dim())
      throw InputError("tensor term has vectors of the wrong dimension");
    coeff_ += t.first * t.second.transpose();
  }
}

TensorElement TensorElement::from_matrix(Space x, Space y, const Mat& coeff) {
  if (coeff.rows() != x.dim() || coeff.cols() != y.dim()) throw InputError("coefficient matrix has the wrong shape");
  std::vector<Term> terms;
  for (int i = 0; i < x.dim(); ++i) terms.emplace_back(Vec::Unit(x.dim(), i), coeff.row(i).transpose());
  return TensorElement(std::move(x), std::move(y), std::move(terms));
}

bool TensorElement::equals(const TensorElement& other, double tol) const {
  return x_.same_as(other.x_) && y_.same_as(other.y_) &&
         (coeff_ - other.coeff_).cwiseAbs().maxCoeff() <= tol;
}

TensorElement single_tensor(const Space& x, const Space& y, const Vec& u, const Vec& v) {
  return TensorElement(x, y, {{u, v}});
}

Vec tensor_coordinates(const Mat& coeff) {
  Vec v(coeff.size());
  for (Eigen::Index i = 0; i < coeff.rows(); ++i)
    for (Eigen::Index j = 0; j < coeff.cols(); ++j)
      v(tensor_index(static_cast<int>(i), static_cast<int>(j), static_cast<int>(coeff.cols()))) = coeff(i, j);
  return v;
}

NormEstimate estimate_injective_norm(const TensorElement& t, const OptimizerConfig& cfg) {
  cfg.validate();
  const Body f = Body::polar(t.x());
  const Body g = Body::polar(t.y());
  const detail::FormMax r = detail::maximize_form(t.coeff_matrix(), f, g, cfg, detail::public_route(cfg));
  return {std::max(r.value, 0.0), r.exact, r.converged, r.agreeing, r.v};
}

double injective_norm(const TensorElement& t, const OptimizerConfig& cfg) {
  return estimate_injective_norm(t, cfg).value;
}

ProjectiveBounds projective_bounds(const TensorElement& t, const OptimizerConfig& cfg,
                                   std::span<const Atom> seeds) {
  cfg.validate();
  const int m = t.x().dim();
  const int n = t.y().dim();
  const Mat& c = t.coeff_matrix();
  const Body bx = Body::primal(t.x());
  const Body by = Body::primal(t.y());
  const Body fx = Body::polar(t.x());
  const Body gy = Body::polar(t.y());
  const detail::Route route = cfg.exact_routes ? detail::Route::kAuto : detail::Route::kAscentOnly;

  ProjectiveBounds out;
  out.exact_pricing = cfg.exact_routes && detail::has_exact_form_route(bx, by);
  out.certificate = Mat::Zero(m, n);
  const double scale = c.cwiseAbs().maxCoeff();
  if (scale == 0.0) return out;
  out.upper = std::numeric_limits<double>::infinity();

  std::vector<std::pair<Vec, Vec>> atoms;
  std::vector<Vec> columns;
  const Vec target = tensor_coordinates(c);
  detail::AtomLp lp(target);
  const auto add_atom = [&](Vec a, Vec b) {
    const double na = t.x().norm(a);
    const double nb = t.y().norm(b);
    if (na == 0.0 || nb == 0.0) return;
    a /= na;
    b /= nb;
    Vec col = tensor_coordinates(a * b.transpose());
    const double len = col.norm();
    for (const Vec& other : columns)
      if (std::abs(col.dot(other)) >= (1.0 - kParallelTol) * len * other.norm()) return;
    lp.add_column(col);
    columns.push_back(std::move(col));
    atoms.emplace_back(std::move(a), std::move(b));
  };
  const auto record_lp = [&] {
    if (!(lp.value() < out.upper)) return;
    out.upper = lp.value();
    out.decomposition.clear();
    const Vec w = lp.weights();
    for (Eigen::Index j = 0; j < w.size(); ++j) {
      if (w(j) == 0.0) continue;
      const auto& [ax, ay] = atoms[static_cast<std::size_t>(j)];
      out.decomposition.push_back({std::abs(w(j)), w(j) < 0 ? Vec(-ax) : ax, ay});
    }
  };
  const auto offer_certificate = [&](const Mat& a, double norm) {
    if (!(norm > 0.0)) return false;
    const double bound = (a.cwiseProduct(c)).sum() / norm;
    if (bound <= out.lower) return false;
    out.lower = bound;
    out.certificate = a / norm;
    return true;
  };

  // A seed set that already decomposes the element is the first incumbent.
  if (!seeds.empty()) {
    Mat sum = Mat::Zero(m, n);
    double cost = 0.0;
    for (const Atom& s : seeds) {
      sum += s.weight * s.x * s.y.transpose();
      cost += s.weight * t.x().norm(s.x) * t.y().norm(s.y);
    }
    if ((sum - c).cwiseAbs().maxCoeff() <= kSeedResidual * std::max(1.0, scale)) {
      out.upper = cost;
      out.decomposition.assign(seeds.begin(), seeds.end());
    }
  }

  // Elementary atoms form the starting basis.
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) add_atom(Vec::Unit(m, i), Vec::Unit(n, j));
  for (const Atom& s : seeds) add_atom(s.x, s.y);

  int quiet = 0;
  for (out.rounds = 1;; ++out.rounds) {
    const bool optimal = lp.solve();
    record_lp();
    const Mat a = from_coordinates(lp.duals(), m, n);
    const detail::FormMax price = detail::maximize_form(a, bx, by, cfg, route);
    bool improved = offer_certificate(a, price.value);

    // Products of norming functionals of the heaviest atoms are forms of norm one.
    std::vector<int> heavy = lp.support();
    const Vec w = lp.weights();
    std::sort(heavy.begin(), heavy.end(), [&](int i, int j) { return std::abs(w(i)) > std::abs(w(j)); });
    if (heavy.size() > kNormingCandidates) heavy.resize(kNormingCandidates);
    for (int j : heavy) {
      const auto& [ax, ay] = atoms[static_cast<std::size_t>(j)];
      improved |= offer_certificate(fx.support(ax).point * gy.support(ay).point.transpose(), 1.0);
    }

    // Smoothed pricing: also separate at a point between the LP duals and the best certificate.
    const Mat mid = kSmoothing * out.certificate + (1.0 - kSmoothing) * a;
    const detail::FormMax mid_price = detail::maximize_form(mid, bx, by, cfg, route);
    improved |= offer_certificate(mid, mid_price.value);

    const double gap = out.upper - out.lower;
    if (price.value <= 1.0 + kTargetGap || gap <= kTargetGap * out.upper) break;
    quiet = improved ? 0 : quiet + 1;
    if (!optimal || quiet >= kQuietRounds || out.rounds >= kMaxRounds) break;

    add_atom(price.u, price.v);
    if (std::abs(mid_price.u.dot(a * mid_price.v)) > 1.0 + kTargetGap) add_atom(mid_price.u, mid_price.v);
    for (int s : lp.support()) {
      const detail::FormMax local =
          detail::ascend_form(a, bx, by, atoms[static_cast<std::size_t>(s)].second, 1e-13, 200);
      if (local.value > 1.0 + kTargetGap) add_atom(local.u, local.v);
    }
    if (lp.columns() > kPruneAt) {
      const std::vector<std::size_t> order = lp.prune(kPruneKeep);
      std::vector<std::pair<Vec, Vec>> kept;
      std::vector<Vec> kept_columns;
      for (std::size_t j : order) {
        kept.push_back(std::move(atoms[j]));
        kept_columns.push_back(std::move(columns[j]));
      }
      atoms = std::move(kept);
      columns = std::move(kept_columns);
    }
  }
  lp.polish();
  record_lp();
  out.lower = std::min(out.lower, out.upper);
  return out;
}

double projective_norm_upper(const TensorElement& t, int k, const OptimizerConfig& cfg) {
  const Mat& c = t.coeff_matrix();
  const int rank = matrix_rank(c);
  if (k < rank) throw InputError("decomposition length is below the rank; no exact decomposition exists");
  const ProjectiveBounds b = projective_bounds(t, cfg);
  if (static_cast<int>(b.decomposition.size()) <= k) return b.upper;

  // Closed-form decompositions that fit in k terms.
  Eigen::JacobiSVD<Mat> svd(c, Eigen::ComputeThinU | Eigen::ComputeThinV);
  double best = 0.0;
  for (int i = 0; i < rank; ++i)
    best += svd.singularValues()(i) * t.x().norm(svd.matrixU().col(i)) * t.y().norm(svd.matrixV().col(i));
  if (c.rows() <= k) {
    double rows = 0.0;
    for (int i = 0; i < c.rows(); ++i) rows += t.x().norm(Vec::Unit(c.rows(), i)) * t.y().norm(c.row(i).transpose());
    best = std::min(best, rows);
  }
  if (c.cols() <= k) {
    double cols = 0.0;
    for (int j = 0; j < c.cols(); ++j) cols += t.x().norm(c.col(j)) * t.y().norm(Vec::Unit(c.cols(), j));
    best = std::min(best, cols);
  }
  return best;
}

double projective_norm_dual_lower(const TensorElement& t, const OptimizerConfig& cfg) {
  return projective_bounds(t, cfg).lower;
}

CrossnormReport projective_norm(const TensorElement& t, const OptimizerConfig& cfg) {
  CrossnormReport r;
  r.injective = injective_norm(t, cfg);
  const ProjectiveBounds b = projective_bounds(t, cfg);
  r.projective_upper = b.upper;
  r.projective_dual_lower = b.lower;
  r.gap = b.upper > 0.0 ? (b.upper - b.lower) / b.upper : 0.0;
  r.certified = b.exact_pricing && r.gap <= kCertifyGap;
  r.rounds = b.rounds;
  r.restarts = cfg.restarts;
  r.seed = cfg.seed;
  return r;
}

LinearizedMap::LinearizedMap(Space x, Space y, Space z, Mat matrix)
    : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)), matrix_(std::move(matrix)) {
  if (matrix_.rows() != z_.dim() || matrix_.cols() != x_.dim() * y_.dim())
    throw InputError("linearized map matrix has the wrong shape");
}

Vec LinearizedMap::apply(const TensorElement& t) const {
  if (!t.x().same_as(x_) || !t.y().same_as(y_)) throw InputError("tensor lives in a different product");
  return matrix_ * tensor_coordinates(t.coeff_matrix());
}

LinearizedMap linearize(const BilinearMap& phi) {
  Mat m(phi.z().dim(), phi.x().dim() * phi.y().dim());
  for (int k = 0; k < phi.z().dim(); ++k) m.row(k) = tensor_coordinates(phi.slices()[static_cast<std::size_t>(k)]).transpose();
  return LinearizedMap(phi.x(), phi.y(), phi.z(), std::move(m));
}

BilinearMap delinearize(const LinearizedMap& map) {
  std::vector<Mat> slices;
  for (int k = 0; k < map.z().dim(); ++k)
    slices.push_back(from_coordinates(map.matrix().row(k).transpose(), map.x().dim(), map.y().dim()));
  return BilinearMap(map.x(), map.y(), map.z(), std::move(slices));
}

NormEstimate estimate_projective_operator_norm(const LinearizedMap& map, const OptimizerConfig& cfg) {
  cfg.validate();
  const int m = map.x().dim();
  const int n = map.y().dim();
  const Body bx = Body::primal(map.x());
  const Body by = Body::primal(map.y());
  const Body bw = Body::polar(map.z());
  const detail::Route inner_route = cfg.exact_routes ? detail::Route::kAuto : detail::Route::kAscentOnly;

  // Dual projective norm of the form F -> <w, Phi(F)>.
  const auto dual_projective = [&](const Vec& w) {
    const Vec g = map.matrix().transpose() * w;
    return detail::maximize_form(from_coordinates(g, m, n), bx, by, cfg, inner_route);
  };

  NormEstimate best;
  best.value = -1.0;
  if (cfg.exact_routes && bw.vertices() != nullptr) {
    best.exact = detail::has_exact_form_route(bx, by);
    for (const Vec& w : *bw.vertices()) {
      const double v = dual_projective(w).value;
      if (v > best.value) {
        best.value = v;
        best.argmax = w;
      }
    }
    best.converged = best.agreeing = 1;
    return best;
  }

  std::vector<double> values;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, 7000 + static_cast<std::uint64_t>(r)));
    Vec w = bw.random_point(rng);
    double prev = -1.0;
    double value = 0.0;
    bool done = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
      const detail::FormMax f = dual_projective(w);
      value = f.value;
      if (it > 0 && value - prev <= cfg.tol * std::max(1.0, value)) {
        done = true;
        break;
      }
      prev = value;
      w = bw.support(map.matrix() * tensor_coordinates(f.u * f.v.transpose())).point;
    }
    best.converged += done ? 1 : 0;
    values.push_back(value);
    if (value > best.value) {
      best.value = value;
      best.argmax = w;
    }
  }
  for (double v : values)
    if (v >= best.value - 1e-6 * std::max(1.0, best.value)) ++best.agreeing;
  if (best.converged == 0)
    throw ConvergenceError("projective operator-norm ascent did not converge", best.value);
  return best;
}

double projective_operator_norm(const LinearizedMap& map, const OptimizerConfig& cfg) {
  return estimate_projective_operator_norm(map, cfg).value;
}

EmbeddedNorms embedded_projective_norms(const TensorElement& t, const Subspace& m, const Subspace& n,
                                        const OptimizerConfig& cfg) {
  if (!t.x().is_ambient() || !t.y().is_ambient()) throw InputError("tensor must be given in ambient coordinates");
  if (!(t.x().ambient() == m.ambient()) || !(t.y().ambient() == n.ambient()))
    throw InputError("subspaces do not live in the tensor's factor spaces");
  std::vector<TensorElement::Term> sub_terms;
  const double scale = std::max(1.0, t.coeff_matrix().cwiseAbs().maxCoeff());
  for (const auto& [x, y] : t.terms()) {
    if (m.residual(x) > 1e-10 * std::max(1.0, x.norm()) || n.residual(y) > 1e-10 * std::max(1.0, y.norm()))
      throw InputError("tensor term lies outside M x N");
    sub_terms.emplace_back(m.coords(x), n.coords(y));
  }
  (void)scale;
  const TensorElement sub(Space(m), Space(n), std::move(sub_terms));
  const ProjectiveBounds sb = projective_bounds(sub, cfg);

  // Every decomposition inside M (x) N is admissible in X (x) Y with the same cost.
  std::vector<Atom> seeds;
  for (const Atom& a : sb.decomposition) seeds.push_back({a.weight, m.basis() * a.x, n.basis() * a.y});
  const ProjectiveBounds ab = projective_bounds(t, cfg, seeds);
  return {sb.upper, ab.upper, sb.lower, ab.lower};
}

TensorElement random_element_in(const Subspace& m, const Subspace& n, Rng& rng) {
  const Mat coords = gaussian_matrix(rng, m.k(), n.k());
  std::vector<TensorElement::Term> terms;
  for (int i = 0; i < m.k(); ++i)
    terms.emplace_back(m.basis().col(i), n.basis() * coords.row(i).transpose());
  return TensorElement(Space(m.ambient()), Space(n.ambient()), std::move(terms));
}

EmbeddingVerdict is_subspace_embedding(const Subspace& m, const Subspace& n, int samples,
                                       const OptimizerConfig& cfg, double tol) {
  if (samples < 1) throw InputError("need at least one sample");
  EmbeddingVerdict v;
  v.samples = samples;
  v.tolerance = tol;
  for (int s = 0; s < samples; ++s) {
    Rng rng(mix_seed(cfg.seed, 9000 + static_cast<std::uint64_t>(s)));
    const TensorElement t = random_element_in(m, n, rng);
    const EmbeddedNorms e = embedded_projective_norms(t, m, n, cfg.with_seed(mix_seed(cfg.seed, s)));
    const double denom = std::max(e.subspace_norm, 1e-300);
    v.worst_gap = std::max(v.worst_gap, (e.subspace_norm - e.ambient_norm) / denom);
    v.worst_violation = std::max(v.worst_violation, e.ambient_norm - e.subspace_norm);
  }
  v.equal = v.worst_gap <= tol;
  return v;
}

}  // namespace bilinext
