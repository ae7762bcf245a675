#pragma once

#include "bilinext/tensor.hpp"

#include <string>

namespace bilinext {

struct ExtensionResult {
  BilinearMap phi_hat;
  double phi_norm = 0.0;
  double phi_hat_norm = 0.0;
  double E_norm = 0.0;
  double P_norm = 0.0;
  double restriction_residual = 0.0;
  Mat E;
  Mat P;
  std::uint64_t phi_seed = 0;
  std::uint64_t phi_hat_seed = 0;
};

/// phi_hat(x, y) = phi(coords_M(E x), coords_N(P y)), no norms computed.
BilinearMap extended_map(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Projection& e,
                         const Projection& p);

/// phi lives on M x N in subspace coordinates; E, P project onto M and N. Norms of phi and
/// phi_hat are computed with independent seeds derived from cfg.seed.
ExtensionResult extend_bilinear(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Projection& e,
                                const Projection& p, const OptimizerConfig& cfg);

/// Orthogonal projections on l2 ambients. Throws UnsupportedError off l2 and
/// ConvergenceError if the two norms come out more than 1e-6 apart.
ExtensionResult extend_bilinear_hilbert(const BilinearMap& phi, const Subspace& m, const Subspace& n,
                                        const OptimizerConfig& cfg);

/// phi_hat restricted to M x N, in subspace coordinates.
BilinearMap restrict_bilinear(const BilinearMap& phi_hat, const Subspace& m, const Subspace& n);

/// Largest coefficient difference between phi_hat restricted to M x N and phi.
double restriction_residual(const BilinearMap& phi_hat, const BilinearMap& phi, const Subspace& m,
                            const Subspace& n);

/// E(x1, x2) = (0, x1 + x2) on l2^2, f(x) = x2, phi_hat = f (x) f, M = R(E), phi = phi_hat on M x M.
/// phi_hat and phi have equal norm although ||E|| = sqrt 2.
struct Counterexample {
  ExtensionResult result;
  /// Norm of the extension of phi built from E itself, (x1 + x2)(y1 + y2).
  double construction_norm = 0.0;
  std::string narrative;
};

Counterexample counterexample_converse(const OptimizerConfig& cfg = {});

struct TensorExtension {
  LinearizedMap t_tilde;
  double restriction_residual = 0.0;
};

/// Extends T on M (x) N coordinates to X (x) Y through the bilinear route.
TensorExtension extend_linear_on_tensor(const LinearizedMap& t, const Subspace& m, const Subspace& n,
                                        const Projection& e, const Projection& p);

}  // namespace bilinext
