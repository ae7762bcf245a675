#pragma once

#include "bilinext/detail/body.hpp"

#include <vector>

namespace bilinext::detail {

/// How a sup is computed.
///   kAuto:       exact route when one exists, ascent otherwise (inner loops).
///   kBoth:       ascent always, plus the exact route when it exists; the larger wins.
///   kAscentOnly: alternating ascent with restarts only.
enum class Route { kAuto, kBoth, kAscentOnly };

inline Route public_route(const OptimizerConfig& cfg) {
  return cfg.exact_routes ? Route::kBoth : Route::kAscentOnly;
}

/// Result of sup_{u in U, v in V} u^T G v.
struct FormMax {
  double value = 0.0;
  Vec u, v;
  bool exact = false;
  int converged = 0;  ///< restarts that met the stagnation test
  int agreeing = 0;   ///< restarts within 1e-6 (relative) of the best value
};

/// True when maximize_form has a non-iterative route for these bodies.
bool has_exact_form_route(const Body& u, const Body& v);

FormMax maximize_form(const Mat& g, const Body& u, const Body& v, const OptimizerConfig& cfg,
                      Route route);

/// One alternating ascent started at v0 (used for local refinement).
FormMax ascend_form(const Mat& g, const Body& u, const Body& v, Vec v0, double tol, int max_iters);

/// Result of sup_{x in X, y in Y, w in W} sum_k w_k x^T C_k y.
struct TriMax {
  double value = 0.0;
  Vec x, y, w;
  bool exact = false;
  int converged = 0;
  int agreeing = 0;
};

TriMax maximize_trilinear(const std::vector<Mat>& slices, const Body& x, const Body& y,
                          const Body& w, const OptimizerConfig& cfg, Route route);

/// sum_k w_k C_k
Mat contract_w(const std::vector<Mat>& slices, const Vec& w);
/// [x^T C_k y]_k
Vec contract_xy(const std::vector<Mat>& slices, const Vec& x, const Vec& y);

}  // namespace bilinext::detail
