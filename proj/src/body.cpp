#include "bilinext/detail/body.hpp"

#include <cmath>
#include <functional>

namespace bilinext::detail {

namespace {

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Calls f on every k-subset of {0..n-1}, in lexicographic order.
void for_each_subset(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    f(idx);
    int i = k - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Sign vectors with the first entry fixed to +1.
std::vector<Vec> half_sign_vectors(int n) {
  std::vector<Vec> out;
  const std::size_t count = std::size_t{1} << (n - 1);
  out.reserve(count);
  for (std::size_t mask = 0; mask < count; ++mask) {
    Vec s = Vec::Ones(n);
    for (int i = 1; i < n; ++i)
      if (mask & (std::size_t{1} << (i - 1))) s(i) = -1.0;
    out.push_back(std::move(s));
  }
  return out;
}

Mat rows_of(const Mat& b, const std::vector<int>& rows) {
  Mat r(static_cast<Eigen::Index>(rows.size()), b.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) r.row(static_cast<Eigen::Index>(i)) = b.row(rows[i]);
  return r;
}

}  // namespace

Body::Body(Space space, BodyKind kind) : space_(std::move(space)), kind_(kind) {}

Support Body::support(const Vec& g) const {
  if (g.size() != dim()) throw InputError("support direction has wrong dimension");
  const LpExponent p = space_.p();
  if (kind_ == BodyKind::kPolar) {
    // h(g) = ||g||_space, attained at the norming functional B^T J_p(B g).
    if (space_.is_ambient()) return {lp_norm(g, p), norming_vector(g, p)};
    const Vec x = space_.basis() * g;
    return {lp_norm(x, p), space_.basis().transpose() * norming_vector(x, p)};
  }
  if (space_.is_ambient()) {
    const LpExponent q = p.conjugate();
    return {lp_norm(g, q), norming_vector(g, q)};
  }
  if (space_.is_euclidean()) {
    const double n = g.norm();
    if (n == 0.0) return {0.0, Vec::Unit(dim(), 0)};
    return {n, g / n};
  }
  if (dim() == 1) {
    const double r = 1.0 / lp_norm(space_.basis().col(0), p);
    const double s = g(0) < 0 ? -1.0 : 1.0;
    return {std::abs(g(0)) * r, Vec::Constant(1, s * r)};
  }
  if (p.is_polyhedral()) return enumerated_support(g);
  return smooth_subspace_support(space_.basis(), p, g);
}

Support Body::enumerated_support(const Vec& g) const {
  const std::vector<Vec>* verts = vertices();
  if (verts == nullptr || verts->empty())
    throw UnsupportedError("polyhedral subspace ball is too large to enumerate");
  Support best{-1.0, Vec()};
  for (const Vec& v : *verts) {
    const double t = g.dot(v);
    if (std::abs(t) > best.value) best = {std::abs(t), t < 0 ? Vec(-v) : v};
  }
  return best;
}

const std::vector<Vec>* Body::vertices() const {
  if (!enumerated_) {
    enumerated_ = true;
    std::vector<Vec> v = enumerate();
    if (!v.empty()) vertices_ = std::move(v);
  }
  return vertices_ ? &*vertices_ : nullptr;
}

std::vector<Vec> Body::enumerate() const {
  const int k = dim();
  const int n = space_.ambient_dim();
  const LpExponent p = space_.p();
  const Mat& b = space_.basis();
  if (k == 1) return {support(Vec::Ones(1)).point};
  if (!p.is_polyhedral()) return {};

  std::vector<Vec> out;
  // The polar of {a : ||B a||_p <= 1} is B^T (l_q ball); its extreme points are images
  // of extreme points of the l_q ball.
  const bool sign_type = (kind_ == BodyKind::kPrimal) == p.is_inf();
  if (kind_ == BodyKind::kPolar || space_.is_ambient()) {
    if (sign_type) {
      if (n - 1 >= 63 || (std::size_t{1} << (n - 1)) > kVertexCap) return {};
      for (const Vec& s : half_sign_vectors(n)) out.push_back(b.transpose() * s);
    } else {
      for (int r = 0; r < n; ++r) out.push_back(b.row(r).transpose());
    }
    return out;
  }

  if (p.is_inf()) {
    // Vertices of {a : |b_r . a| <= 1}: k independent active rows at +-1.
    if (binomial(n, k) * std::ldexp(1.0, k - 1) > static_cast<double>(kVertexCap)) return {};
    const std::vector<Vec> signs = half_sign_vectors(k);
    for_each_subset(n, k, [&](const std::vector<int>& rows) {
      const Mat br = rows_of(b, rows);
      Eigen::FullPivLU<Mat> lu(br);
      lu.setThreshold(1e-10);
      if (lu.rank() < k) return;
      for (const Vec& s : signs) {
        const Vec a = lu.solve(s);
        if ((b * a).cwiseAbs().maxCoeff() <= 1.0 + 1e-9) out.push_back(a);
      }
    });
    return out;
  }

  // p = 1: vertices of {a : sum_r |b_r . a| <= 1} lie on k-1 independent hyperplanes
  // b_r . a = 0.
  if (2.0 * binomial(n, k - 1) > static_cast<double>(kVertexCap)) return {};
  for_each_subset(n, k - 1, [&](const std::vector<int>& rows) {
    const Mat br = rows_of(b, rows);
    Eigen::FullPivLU<Mat> lu(br);
    lu.setThreshold(1e-10);
    if (lu.rank() < k - 1) return;
    const Mat ker = lu.kernel();
    if (ker.cols() != 1) return;
    const Vec a = ker.col(0);
    const double nrm = lp_norm(b * a, p);
    if (nrm > 0.0) out.push_back(a / nrm);
  });
  return out;
}

Support smooth_subspace_support(const Mat& basis, LpExponent p, const Vec& g) {
  const Eigen::Index k = basis.cols();
  const double gn = g.norm();
  if (gn == 0.0) {
    return {0.0, Vec::Unit(k, 0) / lp_norm(basis.col(0), p)};
  }
  if (k == 1) {
    const double r = 1.0 / lp_norm(basis.col(0), p);
    return {std::abs(g(0)) * r, Vec::Constant(1, (g(0) < 0 ? -1.0 : 1.0) * r)};
  }
  const double pv = p.value();
  // Parametrize {a : <g,a> = 1} as a0 + Q w.
  const Vec a0 = g / (gn * gn);
  Eigen::HouseholderQR<Mat> qr(g);
  const Mat qfull = qr.householderQ();
  const Mat q = qfull.rightCols(k - 1);
  const Mat m = basis * q;
  const Vec x0 = basis * a0;

  auto objective = [&](const Vec& w) {
    const Vec x = x0 + m * w;
    double s = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) s += std::pow(std::abs(x(i)), pv);
    return s / pv;
  };

  Vec w = Vec::Zero(k - 1);
  double f = objective(w);
  for (int it = 0; it < 200; ++it) {
    const Vec x = x0 + m * w;
    const double xmax = x.cwiseAbs().maxCoeff();
    Vec grad_x(x.size());
    Vec curv(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      const double ax = std::max(std::abs(x(i)), 1e-10 * xmax);
      grad_x(i) = (x(i) < 0 ? -1.0 : 1.0) * std::pow(std::abs(x(i)), pv - 1.0);
      curv(i) = (pv - 1.0) * std::pow(ax, pv - 2.0);
    }
    const Vec grad = m.transpose() * grad_x;
    Mat hess = m.transpose() * curv.asDiagonal() * m;
    hess.diagonal().array() += 1e-14 * std::max(1.0, hess.diagonal().maxCoeff());
    const Vec step = -hess.ldlt().solve(grad);
    const double decrement = -grad.dot(step);
    if (!(decrement > 1e-30 * std::max(1.0, f))) break;
    double t = 1.0;
    double ft = objective(w + t * step);
    while (ft > f - 1e-4 * t * decrement && t > 1e-20) {
      t *= 0.5;
      ft = objective(w + t * step);
    }
    if (!(ft < f)) break;
    w += t * step;
    f = ft;
  }
  const Vec a = a0 + q * w;
  const double nrm = lp_norm(basis * a, p);
  return {1.0 / nrm, a / nrm};
}

}  // namespace bilinext::detail
