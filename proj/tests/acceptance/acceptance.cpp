// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: acceptance <path to bilinext executable>

#include "bilinext/suite.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>

using namespace bilinext;
using io::json;

namespace {

using Clock = std::chrono::steady_clock;

const LpExponent kAllP[] = {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()};

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

// Sum of singular values from the Gram eigenvalues, independent of the library.
double nuclear_oracle(const Mat& c) {
  const Eigen::SelfAdjointEigenSolver<Mat> es(c.transpose() * c, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) s += std::sqrt(std::max(0.0, es.eigenvalues()(i)));
  return s;
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

Subspace random_proper_subspace(Rng& rng, const NormedSpace& x) {
  std::vector<Vec> span;
  const int k = uniform(rng, 1, x.dim() - 1);
  for (int i = 0; i < k; ++i) span.push_back(gaussian_vector(rng, x.dim()));
  return make_subspace(x, span);
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

std::string worst_of(const SuiteReport& r, const std::string& name) { return fmt(r.invariants.at(name).worst); }

Outcome counterexample_cli(const std::string& cli) {
  const std::filesystem::path out = std::filesystem::temp_directory_path() / "bilinext_acceptance_counterexample.json";
  const auto t0 = Clock::now();
  const int status = std::system((cli + " suite --id counterexample --out " + out.string()).c_str());
  const double elapsed = seconds_since(t0);
  if (status != 0) return {false, "bilinext exited with status " + std::to_string(status)};
  const json s = io::load_file(out.string())["summary"];
  const double e = s["E_norm"], phi = s["phi_norm"], hat = s["phi_hat_norm"];
  const bool ok = std::abs(e - 1.41421356) <= 1e-8 && std::abs(phi - 1.0) <= 1e-8 && std::abs(hat - 1.0) <= 1e-8 &&
                  elapsed < 1.0;
  std::ostringstream d;
  d.precision(12);
  d << "E_norm=" << e << " phi_norm=" << phi << " phi_hat_norm=" << hat << " runtime=" << fmt(elapsed) << "s";
  return {ok, d.str()};
}

Outcome hilbert_extensions() {
  SuiteSpec spec;
  spec.suite_id = "cor53";
  spec.trials = 100;
  spec.dim_max = 5;
  spec.p_values = {LpExponent(2.0)};
  spec.seed = 53;
  const auto t0 = Clock::now();
  const SuiteReport r = run_suite(spec);
  const double elapsed = seconds_since(t0);
  const bool ok = r.pass() && r.invariants.at("hilbert_equality").checked == 100 &&
                  r.invariants.at("hilbert_equality").worst <= 1e-6 && elapsed < 60.0;
  return {ok, "100 trials, worst |phi_hat - phi|=" + worst_of(r, "hilbert_equality") + " runtime=" + fmt(elapsed) + "s"};
}

Outcome projection_chain() {
  SuiteSpec spec;
  spec.suite_id = "thm52";
  spec.trials = 200;
  spec.dim_max = 4;
  spec.p_values = {std::begin(kAllP), std::end(kAllP)};
  spec.seed = 52;
  const SuiteReport r = run_suite(spec);
  const bool ok = r.pass() && r.invariants.at("chain_lower").checked == 200 &&
                  r.invariants.at("chain_lower").worst <= 1e-6 && r.invariants.at("chain_upper").worst <= 1e-6;
  return {ok, "200 trials, worst lower violation=" + worst_of(r, "chain_lower") +
                  " worst upper violation=" + worst_of(r, "chain_upper") +
                  " failures=" + std::to_string(r.failures.size())};
}

Outcome curry_isometry() {
  SuiteSpec spec;
  spec.suite_id = "prop42";
  spec.trials = 100;
  spec.dim_max = 4;
  spec.seed = 42;
  const SuiteReport r = run_suite(spec);
  const bool ok = r.pass() && r.invariants.at("curry_isometry").checked == 100 &&
                  r.invariants.at("curry_isometry").worst <= 1e-6;
  return {ok, "100 trials, worst relative gap=" + worst_of(r, "curry_isometry")};
}

Outcome projective_duality() {
  Rng rng(45);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const NormedSpace x(uniform(rng, 1, 5), 2.0), y(uniform(rng, 1, 5), 2.0);
    const TensorElement t = TensorElement::from_matrix(x, y, gaussian_matrix(rng, x.dim(), y.dim()));
    const OptimizerConfig cfg = OptimizerConfig{}.with_seed(mix_seed(45, static_cast<std::uint64_t>(trial)));
    const double upper = projective_norm_upper(t, x.dim() * y.dim(), cfg);
    const double lower = projective_norm_dual_lower(t, cfg.with_seed(mix_seed(cfg.seed, 1)));
    const double nuc = nuclear_oracle(t.coeff_matrix());
    worst = std::max({worst, rel(upper, lower), rel(upper, nuc), rel(lower, nuc)});
  }
  return {worst <= 1e-4, "50 tensors, worst pairwise relative gap=" + fmt(worst)};
}

Outcome crossnorm_ordering() {
  Rng rng(2);
  double worst_order = -std::numeric_limits<double>::infinity();
  double worst_single = 0.0;
  for (int trial = 0; trial < 500; ++trial) {
    const NormedSpace x(uniform(rng, 1, 4), kAllP[uniform(rng, 0, 2)]);
    const NormedSpace y(uniform(rng, 1, 4), kAllP[uniform(rng, 0, 2)]);
    const OptimizerConfig cfg = OptimizerConfig{}.with_seed(mix_seed(2, static_cast<std::uint64_t>(trial)));
    const CrossnormReport r =
        projective_norm(TensorElement::from_matrix(x, y, gaussian_matrix(rng, x.dim(), y.dim())), cfg);
    worst_order = std::max(worst_order, r.injective - r.projective_upper);

    const Vec u = gaussian_vector(rng, x.dim()), v = gaussian_vector(rng, y.dim());
    const double expected = vector_norm(x, u) * vector_norm(y, v);
    const CrossnormReport s = projective_norm(single_tensor(x, y, u, v), cfg);
    worst_single = std::max({worst_single, std::abs(s.injective - expected), std::abs(s.projective_upper - expected),
                             std::abs(s.projective_dual_lower - expected)});
  }
  return {worst_order <= 1e-6 && worst_single <= 1e-6,
          "500 tensors, max(eps - pi)=" + fmt(worst_order) + ", single tensors max error=" + fmt(worst_single)};
}

Outcome embedded_norms() {
  Rng rng(62);
  double worst_hilbert = 0.0;
  double worst_monotone = -std::numeric_limits<double>::infinity();
  double largest_strict = 0.0;
  for (const LpExponent& p : kAllP) {
    for (int trial = 0; trial < 50; ++trial) {
      const NormedSpace x(uniform(rng, 2, 5), p), y(uniform(rng, 2, 5), p);
      const Subspace m = random_proper_subspace(rng, x), n = random_proper_subspace(rng, y);
      const TensorElement t = random_element_in(m, n, rng);
      const EmbeddedNorms e =
          embedded_projective_norms(t, m, n, OptimizerConfig{}.with_seed(mix_seed(62, static_cast<std::uint64_t>(trial))));
      worst_monotone = std::max(worst_monotone, e.ambient_norm - e.subspace_norm);
      largest_strict = std::max(largest_strict, rel(e.subspace_norm, e.ambient_norm));
      if (p.is_two()) worst_hilbert = std::max(worst_hilbert, rel(e.subspace_norm, e.ambient_norm));
    }
  }
  return {worst_hilbert <= 1e-4 && worst_monotone <= 1e-6,
          "l2 worst relative gap=" + fmt(worst_hilbert) + ", max(ambient - subspace)=" + fmt(worst_monotone) +
              " over 150 samples, largest strict gap=" + fmt(largest_strict)};
}

Outcome linearization_isometry() {
  Rng rng(44);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const NormedSpace x(uniform(rng, 1, 4), 2.0), y(uniform(rng, 1, 4), 2.0), z(uniform(rng, 1, 3), 2.0);
    std::vector<Mat> slices;
    for (int k = 0; k < z.dim(); ++k) slices.push_back(gaussian_matrix(rng, x.dim(), y.dim()));
    const BilinearMap phi(x, y, z, std::move(slices));
    const OptimizerConfig cfg = OptimizerConfig{}.with_seed(mix_seed(44, static_cast<std::uint64_t>(trial)));
    const double lin = projective_operator_norm(linearize(phi), cfg);
    const double direct = bilinear_norm(phi, cfg.with_seed(mix_seed(cfg.seed, 1)));
    worst = std::max(worst, std::abs(lin - direct));
  }
  return {worst <= 1e-4, "50 maps, worst |Phi|_pi - |phi||=" + fmt(worst)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: acceptance <bilinext executable>\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"counterexample reproduction", [&] { return counterexample_cli(cli); }},
      {"Hilbert extensions keep the norm", hilbert_extensions},
      {"extension norm chain", projection_chain},
      {"curry isometry", curry_isometry},
      {"projective norm duality on l2", projective_duality},
      {"crossnorm ordering", crossnorm_ordering},
      {"embedded projective norms", embedded_norms},
      {"linearization isometry", linearization_isometry},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
