#include "bilinext/detail/solvers.hpp"

#include <cmath>

namespace bilinext::detail {

namespace {

constexpr double kAgreeRel = 1e-6;

bool stagnated(double value, double previous, double tol) {
  return value - previous <= tol * std::max(1.0, std::abs(value));
}

std::optional<FormMax> exact_form(const Mat& g, const Body& u, const Body& v) {
  if (u.euclidean() && v.euclidean()) {
    Eigen::JacobiSVD<Mat> svd(g, Eigen::ComputeThinU | Eigen::ComputeThinV);
    FormMax r;
    r.exact = true;
    r.value = svd.singularValues()(0);
    r.u = svd.matrixU().col(0);
    r.v = svd.matrixV().col(0);
    return r;
  }
  const std::vector<Vec>* uv = u.vertices();
  const std::vector<Vec>* vv = v.vertices();
  if (uv == nullptr && vv == nullptr) return std::nullopt;
  const bool enumerate_u = uv != nullptr && (vv == nullptr || uv->size() <= vv->size());
  FormMax r;
  r.exact = true;
  r.value = -1.0;
  if (enumerate_u) {
    for (const Vec& cand : *uv) {
      Support s = v.support(g.transpose() * cand);
      if (s.value > r.value) {
        r.value = s.value;
        r.u = cand;
        r.v = std::move(s.point);
      }
    }
  } else {
    for (const Vec& cand : *vv) {
      Support s = u.support(g * cand);
      if (s.value > r.value) {
        r.value = s.value;
        r.v = cand;
        r.u = std::move(s.point);
      }
    }
  }
  return r;
}

}  // namespace

bool has_exact_form_route(const Body& u, const Body& v) {
  return (u.euclidean() && v.euclidean()) || u.vertices() != nullptr || v.vertices() != nullptr;
}

FormMax ascend_form(const Mat& g, const Body& u, const Body& v, Vec v0, double tol, int max_iters) {
  FormMax r;
  r.v = std::move(v0);
  double prev = -1.0;
  for (int it = 0; it < max_iters; ++it) {
    r.u = u.support(g * r.v).point;
    Support sv = v.support(g.transpose() * r.u);
    r.v = std::move(sv.point);
    r.value = sv.value;
    if (it > 0 && stagnated(r.value, prev, tol)) {
      r.converged = 1;
      break;
    }
    prev = r.value;
  }
  return r;
}

FormMax maximize_form(const Mat& g, const Body& u, const Body& v, const OptimizerConfig& cfg,
                      Route route) {
  if (g.rows() != u.dim() || g.cols() != v.dim()) throw InputError("form shape mismatch");
  std::optional<FormMax> exact;
  if (route != Route::kAscentOnly) exact = exact_form(g, u, v);
  if (route == Route::kAuto && exact) {
    exact->converged = exact->agreeing = 1;
    return *exact;
  }

  FormMax best;
  best.value = -1.0;
  std::vector<double> values;
  int converged = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    FormMax run = ascend_form(g, u, v, v.random_point(rng), cfg.tol, cfg.max_iters);
    converged += run.converged;
    values.push_back(run.value);
    if (run.value > best.value) best = std::move(run);
  }
  best.converged = converged;
  for (double x : values)
    if (x >= best.value - kAgreeRel * std::max(1.0, best.value)) ++best.agreeing;

  if (exact) {
    const int agreeing = best.agreeing;
    if (exact->value >= best.value) best = *exact;
    best.exact = true;
    best.converged = converged;
    best.agreeing = agreeing;
    return best;
  }
  if (converged == 0)
    throw ConvergenceError("form ascent did not converge in any restart", best.value);
  return best;
}

Mat contract_w(const std::vector<Mat>& slices, const Vec& w) {
  Mat out = Mat::Zero(slices.front().rows(), slices.front().cols());
  for (std::size_t k = 0; k < slices.size(); ++k) out += w(static_cast<Eigen::Index>(k)) * slices[k];
  return out;
}

Vec contract_xy(const std::vector<Mat>& slices, const Vec& x, const Vec& y) {
  Vec out(static_cast<Eigen::Index>(slices.size()));
  for (std::size_t k = 0; k < slices.size(); ++k)
    out(static_cast<Eigen::Index>(k)) = x.dot(slices[k] * y);
  return out;
}

namespace {

std::optional<TriMax> exact_trilinear(const std::vector<Mat>& slices, const Body& x, const Body& y,
                                      const Body& w) {
  const auto count = [](const Body& b) {
    const auto* v = b.vertices();
    return v == nullptr ? std::size_t{0} : v->size();
  };
  const Eigen::Index nz = static_cast<Eigen::Index>(slices.size());
  // Candidate enumerations: (enumerated body, the two inner bodies).
  const bool via_w = count(w) > 0 && has_exact_form_route(x, y);
  const bool via_x = count(x) > 0 && has_exact_form_route(w, y);
  const bool via_y = count(y) > 0 && has_exact_form_route(w, x);
  std::size_t best_count = 0;
  int choice = -1;
  const auto consider = [&](bool ok, std::size_t c, int id) {
    if (ok && (choice < 0 || c < best_count)) {
      choice = id;
      best_count = c;
    }
  };
  consider(via_w, count(w), 0);
  consider(via_x, count(x), 1);
  consider(via_y, count(y), 2);
  if (choice < 0) return std::nullopt;

  OptimizerConfig inner;
  TriMax r;
  r.exact = true;
  r.value = -1.0;
  if (choice == 0) {
    for (const Vec& cand : *w.vertices()) {
      FormMax f = maximize_form(contract_w(slices, cand), x, y, inner, Route::kAuto);
      if (f.value > r.value) r = {f.value, f.u, f.v, cand, true, 1, 1};
    }
  } else if (choice == 1) {
    for (const Vec& cand : *x.vertices()) {
      Mat g(nz, y.dim());
      for (Eigen::Index k = 0; k < nz; ++k)
        g.row(k) = cand.transpose() * slices[static_cast<std::size_t>(k)];
      FormMax f = maximize_form(g, w, y, inner, Route::kAuto);
      if (f.value > r.value) r = {f.value, cand, f.v, f.u, true, 1, 1};
    }
  } else {
    for (const Vec& cand : *y.vertices()) {
      Mat g(nz, x.dim());
      for (Eigen::Index k = 0; k < nz; ++k)
        g.row(k) = (slices[static_cast<std::size_t>(k)] * cand).transpose();
      FormMax f = maximize_form(g, w, x, inner, Route::kAuto);
      if (f.value > r.value) r = {f.value, f.v, cand, f.u, true, 1, 1};
    }
  }
  return r;
}

}  // namespace

TriMax maximize_trilinear(const std::vector<Mat>& slices, const Body& x, const Body& y,
                          const Body& w, const OptimizerConfig& cfg, Route route) {
  if (static_cast<int>(slices.size()) != w.dim()) throw InputError("trilinear slice count mismatch");
  for (const Mat& s : slices)
    if (s.rows() != x.dim() || s.cols() != y.dim()) throw InputError("trilinear slice shape mismatch");

  std::optional<TriMax> exact;
  if (route != Route::kAscentOnly) exact = exact_trilinear(slices, x, y, w);
  if (route == Route::kAuto && exact) return *exact;

  TriMax best;
  best.value = -1.0;
  std::vector<double> values;
  int converged = 0;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    Vec xv = x.random_point(rng);
    Vec yv = y.random_point(rng);
    Vec wv;
    double prev = -1.0;
    double value = 0.0;
    bool done = false;
    for (int it = 0; it < cfg.max_iters; ++it) {
      wv = w.support(contract_xy(slices, xv, yv)).point;
      xv = x.support(contract_w(slices, wv) * yv).point;
      wv = w.support(contract_xy(slices, xv, yv)).point;
      yv = y.support(contract_w(slices, wv).transpose() * xv).point;
      Support sw = w.support(contract_xy(slices, xv, yv));
      wv = std::move(sw.point);
      value = sw.value;
      if (it > 0 && stagnated(value, prev, cfg.tol)) {
        done = true;
        break;
      }
      prev = value;
    }
    converged += done ? 1 : 0;
    values.push_back(value);
    if (value > best.value) best = {value, xv, yv, wv, false, 0, 0};
  }
  best.converged = converged;
  for (double v : values)
    if (v >= best.value - kAgreeRel * std::max(1.0, best.value)) ++best.agreeing;

  if (exact) {
    const int agreeing = best.agreeing;
    if (exact->value >= best.value) best = *exact;
    best.exact = true;
    best.converged = converged;
    best.agreeing = agreeing;
    return best;
  }
  if (converged == 0)
    throw ConvergenceError("bilinear ascent did not converge in any restart", best.value);
  return best;
}

}  // namespace bilinext::detail
