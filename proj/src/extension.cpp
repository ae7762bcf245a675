#include "bilinext/extension.hpp"

#include <cmath>

namespace bilinext {

namespace {

constexpr double kRangeTol = 1e-10;

void check_projection(const Projection& e, const Subspace& m, const char* what) {
  if (!(e.range().ambient() == m.ambient()) || e.range().k() != m.k() || e.range().principal_gap(m) > kRangeTol)
    throw InputError(std::string(what) + " does not project onto the given subspace");
}

void check_domains(const BilinearMap& phi, const Subspace& m, const Subspace& n) {
  if (phi.x().dim() != m.k() || phi.y().dim() != n.k())
    throw InputError("bilinear map domains do not match the subspace dimensions");
  if (!(phi.x().ambient() == m.ambient()) || !(phi.y().ambient() == n.ambient()))
    throw InputError("bilinear map is not defined on the given subspaces");
}

}  // namespace

BilinearMap extended_map(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Projection& e,
                         const Projection& p) {
  check_domains(phi, m, n);
  check_projection(e, m, "E");
  check_projection(p, n, "P");
  const Mat left = e.matrix().transpose() * m.basis();   // (coords_M E)^T
  const Mat right = n.basis().transpose() * p.matrix();  // coords_N P
  std::vector<Mat> slices;
  for (const Mat& c : phi.slices()) slices.push_back(left * c * right);
  return BilinearMap(Space(m.ambient()), Space(n.ambient()), phi.z(), std::move(slices));
}

BilinearMap restrict_bilinear(const BilinearMap& phi_hat, const Subspace& m, const Subspace& n) {
  if (!phi_hat.x().is_ambient() || !phi_hat.y().is_ambient() || !(phi_hat.x().ambient() == m.ambient()) ||
      !(phi_hat.y().ambient() == n.ambient()))
    throw InputError("restriction needs a map on the ambient spaces of M and N");
  std::vector<Mat> slices;
  for (const Mat& c : phi_hat.slices()) slices.push_back(m.basis().transpose() * c * n.basis());
  return BilinearMap(Space(m), Space(n), phi_hat.z(), std::move(slices));
}

double restriction_residual(const BilinearMap& phi_hat, const BilinearMap& phi, const Subspace& m,
                            const Subspace& n) {
  return restrict_bilinear(phi_hat, m, n).distance(phi);
}

ExtensionResult extend_bilinear(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Projection& e,
                                const Projection& p, const OptimizerConfig& cfg) {
  cfg.validate();
  BilinearMap phi_hat = extended_map(phi, m, n, e, p);
  ExtensionResult r{phi_hat, 0.0, 0.0, 0.0, 0.0, 0.0, e.matrix(), p.matrix(), mix_seed(cfg.seed, 1),
                    mix_seed(cfg.seed, 2)};
  r.restriction_residual = restriction_residual(phi_hat, phi, m, n);
  r.phi_norm = bilinear_norm(phi, cfg.with_seed(r.phi_seed));
  r.phi_hat_norm = bilinear_norm(phi_hat, cfg.with_seed(r.phi_hat_seed));
  r.E_norm = operator_norm(e.map(), cfg.with_seed(mix_seed(cfg.seed, 3)));
  r.P_norm = operator_norm(p.map(), cfg.with_seed(mix_seed(cfg.seed, 4)));
  return r;
}

ExtensionResult extend_bilinear_hilbert(const BilinearMap& phi, const Subspace& m, const Subspace& n,
                                        const OptimizerConfig& cfg) {
  if (!m.ambient().p().is_two() || !n.ambient().p().is_two())
    throw UnsupportedError("orthogonal projections need l2 ambient spaces");
  ExtensionResult r = extend_bilinear(phi, m, n, orthogonal_projection(m), orthogonal_projection(n), cfg);
  if (std::abs(r.phi_hat_norm - r.phi_norm) > 1e-6)
    throw ConvergenceError("extension norm differs from the original on a Hilbert instance", r.phi_hat_norm);
  return r;
}

Counterexample counterexample_converse(const OptimizerConfig& cfg) {
  const NormedSpace x(2, 2.0);
  const NormedSpace scalars(1, 2.0);
  Mat e(2, 2);
  e << 0.0, 0.0, 1.0, 1.0;
  const Subspace m = make_subspace(x, std::vector<Vec>{Vec::Unit(2, 1)});
  const Projection proj(LinearMap(x, x, e), m);

  const Vec f = Vec::Unit(2, 1);
  const BilinearMap phi_hat(x, x, scalars, {f * f.transpose()});
  const BilinearMap phi = restrict_bilinear(phi_hat, m, m);

  ExtensionResult r{phi_hat, 0.0, 0.0, 0.0, 0.0, 0.0, e, e, mix_seed(cfg.seed, 1), mix_seed(cfg.seed, 2)};
  r.restriction_residual = restriction_residual(phi_hat, phi, m, m);
  r.phi_norm = bilinear_norm(phi, cfg.with_seed(r.phi_seed));
  r.phi_hat_norm = bilinear_norm(phi_hat, cfg.with_seed(r.phi_hat_seed));
  r.E_norm = operator_norm(proj.map(), cfg.with_seed(mix_seed(cfg.seed, 3)));
  r.P_norm = r.E_norm;

  Counterexample out{r, 0.0, ""};
  out.construction_norm = bilinear_norm(extended_map(phi, m, m, proj, proj), cfg.with_seed(mix_seed(cfg.seed, 5)));
  out.narrative =
      "E(x1,x2) = (0, x1+x2) is a projection of l2^2 onto M = span{(0,1)} with ||E|| = sqrt 2. "
      "phi_hat(x,y) = x2*y2 extends phi = phi_hat|MxM, and ||phi_hat|| = ||phi|| = 1. So an extension "
      "of equal norm exists although the projection has norm above 1. The extension built from E "
      "itself, (x1+x2)(y1+y2), has norm 2.";
  return out;
}

TensorExtension extend_linear_on_tensor(const LinearizedMap& t, const Subspace& m, const Subspace& n,
                                        const Projection& e, const Projection& p) {
  const BilinearMap phi = delinearize(t);
  const BilinearMap phi_hat = extended_map(phi, m, n, e, p);
  LinearizedMap t_tilde = linearize(phi_hat);
  const double residual = (linearize(restrict_bilinear(phi_hat, m, n)).matrix() - t.matrix()).cwiseAbs().maxCoeff();
  return {std::move(t_tilde), residual};
}

}  // namespace bilinext
