#include "bilinext/suite.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <thread>

namespace bilinext {

namespace {

using io::json;

struct Check {
  std::string name;
  double measured;
};

/// Everything one trial produces; merged in trial order.
struct TrialOutcome {
  std::vector<Check> checks;
  std::vector<SuiteFailure> failures;
  json notes = json::object();
  json replay;
};

class Trial {
 public:
  Trial(const SuiteSpec& spec, int index)
      : spec_(spec), index_(index), seed_(mix_seed(spec.seed, static_cast<std::uint64_t>(index))), rng_(seed_) {}

  int index() const { return index_; }
  std::uint64_t seed() const { return seed_; }
  Rng& rng() { return rng_; }
  OptimizerConfig cfg(std::uint64_t stream) const { return spec_.optimizer.with_seed(mix_seed(seed_, stream)); }

  int dim(int lo = 1, int hi = 8) {
    const int a = std::max(spec_.dim_min, lo);
    const int b = std::max(a, std::min(spec_.dim_max, hi));
    return std::uniform_int_distribution<int>(a, b)(rng_);
  }
  LpExponent p(const std::vector<LpExponent>& choices) {
    return choices[std::uniform_int_distribution<std::size_t>(0, choices.size() - 1)(rng_)];
  }
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  TrialOutcome outcome;

 private:
  const SuiteSpec& spec_;
  int index_;
  std::uint64_t seed_;
  Rng rng_;
};

using SuiteBody = std::function<void(Trial&, const std::vector<LpExponent>&)>;

struct SuiteDef {
  std::vector<LpExponent> default_p;
  std::map<std::string, double> tolerances;
  int default_trials;
  SuiteBody body;
};

std::vector<LpExponent> all_p() { return {LpExponent(1.0), LpExponent(2.0), LpExponent::infinity()}; }

Subspace random_subspace(Trial& t, const NormedSpace& x) {
  if (x.dim() == 1) return whole_space(x);
  const int k = t.uniform(1, x.dim() - 1);
  std::vector<Vec> span;
  for (int i = 0; i < k; ++i) span.push_back(gaussian_vector(t.rng(), x.dim()));
  return make_subspace(x, span);
}

/// Span of a random set of coordinates together with the coordinate projection (norm one).
std::pair<Subspace, Projection> coordinate_subspace(Trial& t, const NormedSpace& x) {
  std::vector<int> idx(static_cast<std::size_t>(x.dim()));
  std::iota(idx.begin(), idx.end(), 0);
  std::shuffle(idx.begin(), idx.end(), t.rng());
  const int k = x.dim() == 1 ? 1 : t.uniform(1, x.dim() - 1);
  std::sort(idx.begin(), idx.begin() + k);
  std::vector<Vec> span;
  Mat e = Mat::Zero(x.dim(), x.dim());
  for (int i = 0; i < k; ++i) {
    span.push_back(Vec::Unit(x.dim(), idx[static_cast<std::size_t>(i)]));
    e(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(i)]) = 1.0;
  }
  Subspace m = make_subspace(x, span);
  Projection p(LinearMap(x, x, e), m);
  return {std::move(m), std::move(p)};
}

/// An oblique projection onto M along a random complement.
Projection random_projection(Trial& t, const Subspace& m) {
  const int n = m.ambient().dim();
  if (m.k() == n) return Projection(LinearMap::identity(Space(m.ambient())), m);
  for (int attempt = 0;; ++attempt) {
    std::vector<Vec> span;
    for (int i = 0; i < n - m.k(); ++i) span.push_back(gaussian_vector(t.rng(), n));
    try {
      return projection_onto(m, make_subspace(m.ambient(), span));
    } catch (const InputError&) {
      if (attempt > 8) throw;
    }
  }
}

Projection euclidean_projection(const Subspace& m) {
  const NormedSpace& a = m.ambient();
  return Projection(LinearMap(a, a, m.basis() * m.basis().transpose()), m);
}

BilinearMap random_bilinear(Trial& t, const Space& x, const Space& y, const Space& z) {
  std::vector<Mat> slices;
  for (int k = 0; k < z.dim(); ++k) slices.push_back(gaussian_matrix(t.rng(), x.dim(), y.dim()));
  return BilinearMap(x, y, z, std::move(slices));
}

void check(Trial& t, const std::string& name, double measured) { t.outcome.checks.push_back({name, measured}); }

double rel(double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}); }

double nuclear(const Mat& c) { return Eigen::JacobiSVD<Mat>(c).singularValues().sum(); }
double spectral(const Mat& c) { return Eigen::JacobiSVD<Mat>(c).singularValues()(0); }

json replay(const char* command, json input) { return {{"command", command}, {"input", std::move(input)}}; }

// ---- suites -------------------------------------------------------------------------------

void crossnorms(Trial& t, const std::vector<LpExponent>& ps) {
  const NormedSpace x(t.dim(), t.p(ps));
  const NormedSpace y(t.dim(), t.p(ps));
  const TensorElement f = TensorElement::from_matrix(x, y, gaussian_matrix(t.rng(), x.dim(), y.dim()));
  t.outcome.replay = replay("tensor-norm", io::write_tensor(f));
  const CrossnormReport r = projective_norm(f, t.cfg(1));
  check(t, "eps_le_pi", r.injective - r.projective_upper);
  check(t, "lower_le_upper", r.projective_dual_lower - r.projective_upper);
  if (x.p().is_two() && y.p().is_two()) {
    const Mat& c = f.coeff_matrix();
    check(t, "l2_injective", std::abs(r.injective - spectral(c)));
    check(t, "l2_nuclear", std::max(rel(r.projective_upper, nuclear(c)), rel(r.projective_dual_lower, nuclear(c))));
  }
  t.outcome.notes["certified"] = r.certified;

  const Vec u = gaussian_vector(t.rng(), x.dim());
  const Vec v = gaussian_vector(t.rng(), y.dim());
  const double expected = vector_norm(x, u) * vector_norm(y, v);
  const CrossnormReport s = projective_norm(single_tensor(x, y, u, v), t.cfg(2));
  check(t, "single_tensor", std::max({std::abs(s.injective - expected), std::abs(s.projective_upper - expected),
                                      std::abs(s.projective_dual_lower - expected)}));
}

void prop42(Trial& t, const std::vector<LpExponent>& ps) {
  const NormedSpace x(t.dim(), t.p(ps));
  const NormedSpace y(t.dim(), t.p(ps));
  const NormedSpace z(t.dim(1, 3), t.p(ps));
  const BilinearMap phi = random_bilinear(t, x, y, z);
  t.outcome.replay = replay("bilinear-norm", io::write_bilinear_map(phi));
  const CurriedMap curried = curry(phi);
  check(t, "roundtrip", uncurry(curried).distance(phi));
  const double a = bilinear_norm(phi, t.cfg(1));
  const double b = operator_norm(curried, t.cfg(2));
  check(t, "curry_isometry", rel(a, b));
}

void prop44(Trial& t, const std::vector<LpExponent>& ps) {
  const NormedSpace x(t.dim(), t.p(ps));
  const NormedSpace y(t.dim(), t.p(ps));
  const NormedSpace z(t.dim(1, 3), t.p(ps));
  const BilinearMap phi = random_bilinear(t, x, y, z);
  t.outcome.replay = replay("bilinear-norm", io::write_bilinear_map(phi));
  const LinearizedMap lin = linearize(phi);
  const Vec u = gaussian_vector(t.rng(), x.dim());
  const Vec v = gaussian_vector(t.rng(), y.dim());
  check(t, "single_tensor_eval", (lin.apply(single_tensor(x, y, u, v)) - phi.eval(u, v)).cwiseAbs().maxCoeff());
  OptimizerConfig ascent = t.cfg(2);
  ascent.exact_routes = false;
  const double left = projective_operator_norm(lin, t.cfg(1));
  const double right = bilinear_norm(phi, ascent);
  check(t, "linearize_isometry", std::abs(left - right));
}

void prop45(Trial& t, const std::vector<LpExponent>& ps) {
  const NormedSpace x(t.dim(), t.p(ps));
  const NormedSpace y(t.dim(), t.p(ps));
  const TensorElement f = TensorElement::from_matrix(x, y, gaussian_matrix(t.rng(), x.dim(), y.dim()));
  t.outcome.replay = replay("tensor-norm", io::write_tensor(f));
  const double upper = projective_norm_upper(f, x.dim() * y.dim(), t.cfg(1));
  const double lower = projective_norm_dual_lower(f, t.cfg(2));
  check(t, "lower_le_upper", lower - upper);
  if (x.p().is_two() && y.p().is_two()) {
    const double nuc = nuclear(f.coeff_matrix());
    check(t, "l2_nuclear", std::max({rel(upper, lower), rel(upper, nuc), rel(lower, nuc)}));
  }
}

void extension_checks(Trial& t, const ExtensionResult& r, bool chain) {
  check(t, "restriction", r.restriction_residual);
  if (chain) {
    check(t, "chain_lower", r.phi_norm - r.phi_hat_norm);
    check(t, "chain_upper", r.phi_hat_norm - r.phi_norm * r.E_norm * r.P_norm);
  }
}

void thm52(Trial& t, const std::vector<LpExponent>& ps) {
  const LpExponent p = t.p(ps);
  const NormedSpace x(t.dim(2), p);
  const NormedSpace y(t.dim(2), p);
  const NormedSpace z(t.dim(1, 3), p);
  const int variant = t.index() % 3;
  std::optional<Subspace> m, n;
  std::optional<Projection> e, q;
  if (variant == 2) {
    auto [ms, es] = coordinate_subspace(t, x);
    auto [ns, qs] = coordinate_subspace(t, y);
    m = ms, n = ns, e = es, q = qs;
  } else {
    m = random_subspace(t, x);
    n = random_subspace(t, y);
    e = variant == 0 ? random_projection(t, *m) : euclidean_projection(*m);
    q = variant == 0 ? random_projection(t, *n) : euclidean_projection(*n);
  }
  const BilinearMap phi = random_bilinear(t, Space(*m), Space(*n), z);
  t.outcome.replay = replay("extend", io::write_extend_input(phi, *m, *n, e->matrix(), q->matrix()));
  const ExtensionResult r = extend_bilinear(phi, *m, *n, *e, *q, t.cfg(1));
  extension_checks(t, r, true);
  if (std::abs(r.E_norm - 1.0) <= 1e-9 && std::abs(r.P_norm - 1.0) <= 1e-9)
    check(t, "norm_one_equality", std::abs(r.phi_hat_norm - r.phi_norm));
}

void cor53(Trial& t, const std::vector<LpExponent>&) {
  const NormedSpace x(t.dim(2), 2.0);
  const NormedSpace y(t.dim(2), 2.0);
  const NormedSpace z(t.dim(1, 3), 2.0);
  const Subspace m = random_subspace(t, x);
  const Subspace n = random_subspace(t, y);
  const BilinearMap phi = random_bilinear(t, Space(m), Space(n), z);
  const Projection e = orthogonal_projection(m);
  const Projection q = orthogonal_projection(n);
  t.outcome.replay = replay("extend", io::write_extend_input(phi, m, n, e.matrix(), q.matrix()));
  const ExtensionResult r = extend_bilinear(phi, m, n, e, q, t.cfg(1));
  extension_checks(t, r, false);
  check(t, "hilbert_equality", std::abs(r.phi_hat_norm - r.phi_norm));
}

void counterexample(Trial& t, const std::vector<LpExponent>&) {
  const Counterexample c = counterexample_converse(t.cfg(1));
  const ExtensionResult& r = c.result;
  const NormedSpace x(2, 2.0);
  const Subspace m = make_subspace(x, std::vector<Vec>{Vec::Unit(2, 1)});
  t.outcome.replay = replay("extend", io::write_extend_input(restrict_bilinear(r.phi_hat, m, m), m, m, r.E, r.P));
  check(t, "E_norm", std::abs(r.E_norm - std::sqrt(2.0)));
  check(t, "phi_norm", std::abs(r.phi_norm - 1.0));
  check(t, "phi_hat_norm", std::abs(r.phi_hat_norm - 1.0));
  check(t, "restriction", r.restriction_residual);
  t.outcome.notes = {{"E_norm", r.E_norm},
                     {"phi_norm", r.phi_norm},
                     {"phi_hat_norm", r.phi_hat_norm},
                     {"construction_norm", c.construction_norm},
                     {"narrative", c.narrative}};
}

void cor61(Trial& t, const std::vector<LpExponent>& ps) {
  const LpExponent p = t.p(ps);
  const NormedSpace x(t.dim(2, 4), p);
  const NormedSpace y(t.dim(2, 4), p);
  const NormedSpace z(t.dim(1, 2), p);
  std::optional<Subspace> m, n;
  std::optional<Projection> e, q;
  if (p.is_two()) {
    m = random_subspace(t, x);
    n = random_subspace(t, y);
    e = orthogonal_projection(*m);
    q = orthogonal_projection(*n);
  } else {
    auto [ms, es] = coordinate_subspace(t, x);
    auto [ns, qs] = coordinate_subspace(t, y);
    m = ms, n = ns, e = es, q = qs;
  }
  const LinearizedMap tm(Space(*m), Space(*n), z, gaussian_matrix(t.rng(), z.dim(), m->k() * n->k()));
  t.outcome.replay = replay("extend", io::write_extend_input(delinearize(tm), *m, *n, e->matrix(), q->matrix()));
  const TensorExtension ext = extend_linear_on_tensor(tm, *m, *n, *e, *q);
  check(t, "restriction", ext.restriction_residual);
  const BilinearMap route = extended_map(delinearize(tm), *m, *n, *e, *q);
  check(t, "bilinear_route", (linearize(route).matrix() - ext.t_tilde.matrix()).cwiseAbs().maxCoeff());
  const double tn = projective_operator_norm(tm, t.cfg(1));
  const double ttn = projective_operator_norm(ext.t_tilde, t.cfg(2));
  check(t, "norm_one_equality", std::abs(ttn - tn));
}

void cor62(Trial& t, const std::vector<LpExponent>& ps) {
  const LpExponent p = t.p(ps);
  const NormedSpace x(t.dim(2, 4), p);
  const NormedSpace y(t.dim(2, 4), p);
  const bool coordinate = t.index() % 2 == 1;
  const Subspace m = coordinate ? coordinate_subspace(t, x).first : random_subspace(t, x);
  const Subspace n = coordinate ? coordinate_subspace(t, y).first : random_subspace(t, y);
  const TensorElement f = random_element_in(m, n, t.rng());
  t.outcome.replay = replay("tensor-norm", io::write_tensor(f));
  const EmbeddedNorms e = embedded_projective_norms(f, m, n, t.cfg(1));
  check(t, "monotone", e.ambient_norm - e.subspace_norm);
  const double gap = (e.subspace_norm - e.ambient_norm) / std::max(e.subspace_norm, 1e-300);
  if (p.is_two()) check(t, "hilbert_equality", std::abs(gap));
  if (coordinate) check(t, "coordinate_equality", std::abs(gap));
  t.outcome.notes = {{"relative_gap", gap}, {"p", io::write_exponent(p)}, {"coordinate", coordinate}};
}

const std::map<std::string, SuiteDef>& registry() {
  static const std::map<std::string, SuiteDef> suites = {
      {"crossnorms",
       {all_p(),
        {{"eps_le_pi", 1e-6}, {"lower_le_upper", 1e-6}, {"l2_injective", 1e-7}, {"l2_nuclear", 1e-4},
         {"single_tensor", 1e-6}},
        50,
        crossnorms}},
      {"prop42", {all_p(), {{"roundtrip", 0.0}, {"curry_isometry", 1e-6}}, 50, prop42}},
      {"prop44", {{LpExponent(2.0)}, {{"single_tensor_eval", 1e-10}, {"linearize_isometry", 1e-4}}, 50, prop44}},
      {"prop45", {{LpExponent(2.0)}, {{"lower_le_upper", 1e-6}, {"l2_nuclear", 1e-4}}, 50, prop45}},
      {"thm52",
       {all_p(),
        {{"restriction", 1e-10}, {"chain_lower", 1e-6}, {"chain_upper", 1e-6}, {"norm_one_equality", 1e-6}},
        50,
        thm52}},
      {"cor53", {{LpExponent(2.0)}, {{"restriction", 1e-10}, {"hilbert_equality", 1e-6}}, 50, cor53}},
      {"counterexample",
       {{LpExponent(2.0)},
        {{"E_norm", 1e-8}, {"phi_norm", 1e-8}, {"phi_hat_norm", 1e-8}, {"restriction", 1e-10}},
        1,
        counterexample}},
      {"cor61",
       {all_p(), {{"restriction", 1e-8}, {"bilinear_route", 1e-12}, {"norm_one_equality", 1e-4}}, 20, cor61}},
      {"cor62",
       {all_p(), {{"monotone", 1e-6}, {"hilbert_equality", 1e-4}, {"coordinate_equality", 1e-4}}, 30, cor62}},
  };
  return suites;
}

const SuiteDef& lookup(const std::string& id) {
  const auto it = registry().find(id);
  if (it == registry().end()) throw InputError("unknown suite id \"" + id + "\"");
  return it->second;
}

void run_parallel(int n, const std::function<void(int)>& fn) {
  const int workers = std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (std::thread& th : pool) th.join();
}

}  // namespace

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const auto& [id, def] : registry()) v.push_back(id);
    return v;
  }();
  return ids;
}

int default_trials(const std::string& suite_id) { return lookup(suite_id).default_trials; }

std::map<std::string, double> default_tolerances(const std::string& suite_id) { return lookup(suite_id).tolerances; }

void validate(const SuiteSpec& spec) {
  const SuiteDef& def = lookup(spec.suite_id);
  if (spec.trials < 1) throw InputError("trials must be at least 1");
  if (spec.dim_min < 1 || spec.dim_max > 8 || spec.dim_min > spec.dim_max)
    throw InputError("dims must satisfy 1 <= min <= max <= 8");
  for (const auto& [key, value] : spec.tolerances) {
    if (!def.tolerances.contains(key)) throw InputError("suite " + spec.suite_id + " has no tolerance \"" + key + "\"");
    if (!(value >= 0.0)) throw InputError("tolerance " + key + " must be nonnegative");
  }
  if (spec.suite_id == "cor53" || spec.suite_id == "counterexample")
    for (const LpExponent& p : spec.p_values)
      if (!p.is_two()) throw InputError("suite " + spec.suite_id + " is defined for p = 2 only");
  spec.optimizer.validate();
}

SuiteReport run_suite(const SuiteSpec& spec) {
  validate(spec);
  const SuiteDef& def = lookup(spec.suite_id);
  std::map<std::string, double> tol = def.tolerances;
  for (const auto& [key, value] : spec.tolerances) tol[key] = value;
  const std::vector<LpExponent> ps = spec.p_values.empty() ? def.default_p : spec.p_values;

  const auto start = std::chrono::steady_clock::now();
  std::vector<TrialOutcome> outcomes(static_cast<std::size_t>(spec.trials));
  run_parallel(spec.trials, [&](int i) {
    Trial t(spec, i);
    try {
      def.body(t, ps);
    } catch (const ConvergenceError& e) {
      t.outcome.failures.push_back({i, t.seed(), std::string("convergence: ") + e.what(), e.best_value(), 0.0, {}});
    } catch (const std::exception& e) {
      t.outcome.failures.push_back({i, t.seed(), std::string("error: ") + e.what(), 0.0, 0.0, {}});
    }
    for (const Check& c : t.outcome.checks) {
      const double limit = tol.at(c.name);
      if (!(c.measured <= limit)) t.outcome.failures.push_back({i, t.seed(), c.name, c.measured, limit, {}});
    }
    for (SuiteFailure& f : t.outcome.failures) f.instance = t.outcome.replay;
    outcomes[static_cast<std::size_t>(i)] = std::move(t.outcome);
  });

  SuiteReport report;
  report.suite_id = spec.suite_id;
  report.trials_run = spec.trials;
  for (const auto& [name, limit] : tol) report.invariants[name] = {-std::numeric_limits<double>::infinity(), limit, 0};
  json notes = json::array();
  for (TrialOutcome& o : outcomes) {
    for (const Check& c : o.checks) {
      InvariantStats& s = report.invariants[c.name];
      s.worst = std::max(s.worst, c.measured);
      ++s.checked;
    }
    for (SuiteFailure& f : o.failures) report.failures.push_back(std::move(f));
    if (!o.notes.empty()) notes.push_back(std::move(o.notes));
  }
  report.worst_gap = 0.0;
  for (auto& [name, s] : report.invariants) {
    if (s.checked == 0) s.worst = 0.0;
    report.worst_gap = std::max(report.worst_gap, s.worst);
  }
  report.summary = {{"trial_notes", notes}};
  if (spec.suite_id == "counterexample" && !notes.empty()) {
    for (const char* key : {"E_norm", "phi_norm", "phi_hat_norm", "construction_norm", "narrative"})
      report.summary[key] = notes[0][key];
  }
  if (spec.suite_id == "cor62") {
    double strict = 0.0;
    for (const json& n : notes) strict = std::max(strict, n["relative_gap"].get<double>());
    report.summary["largest_relative_gap"] = strict;
  }
  report.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

json to_json(const SuiteReport& report, const SuiteSpec& spec) {
  json ps = json::array();
  for (const LpExponent& p : spec.p_values.empty() ? lookup(spec.suite_id).default_p : spec.p_values)
    ps.push_back(io::write_exponent(p));
  json invariants = json::object();
  for (const auto& [name, s] : report.invariants)
    invariants[name] = {{"worst", s.worst}, {"tolerance", s.tolerance}, {"checked", s.checked}};
  json failures = json::array();
  for (const SuiteFailure& f : report.failures)
    failures.push_back({{"trial", f.trial},
                        {"seed", f.seed},
                        {"invariant", f.invariant},
                        {"measured", f.measured},
                        {"tolerance", f.tolerance},
                        {"instance", f.instance}});
  return {{"schema", "bilinext.suite_report/1"},
          {"suite_id", report.suite_id},
          {"pass", report.pass()},
          {"trials_run", report.trials_run},
          {"seed", spec.seed},
          {"dims", {spec.dim_min, spec.dim_max}},
          {"p_values", ps},
          {"invariants", invariants},
          {"worst_gap", report.worst_gap},
          {"failures", failures},
          {"summary", report.summary},
          {"timing", {{"runtime_seconds", report.runtime_seconds}}}};
}

std::string to_csv(const SuiteReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "suite_id,invariant,checked,worst,tolerance,failures\n";
  for (const auto& [name, s] : report.invariants) {
    const auto failed = std::count_if(report.failures.begin(), report.failures.end(),
                                      [&](const SuiteFailure& f) { return f.invariant == name; });
    out << report.suite_id << ',' << name << ',' << s.checked << ',' << s.worst << ',' << s.tolerance << ',' << failed
        << '\n';
  }
  return out.str();
}

}  // namespace bilinext
