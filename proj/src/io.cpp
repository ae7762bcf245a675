#include "bilinext/io.hpp"

#include <fstream>
#include <sstream>

namespace bilinext::io {

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double number(const json& j) {
  if (!j.is_number()) throw SchemaError("expected a number");
  return j.get<double>();
}

int positive_int(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw SchemaError(std::string(what) + " must be a positive integer");
  return static_cast<int>(j.get<long long>());
}

std::string flat_value(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

}  // namespace

LpExponent read_exponent(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return LpExponent::infinity();
    throw SchemaError("norm exponent string must be \"inf\"");
  }
  try {
    return LpExponent(number(j));
  } catch (const SchemaError&) {
    throw;
  } catch (const InputError& e) {
    throw SchemaError(e.what());
  }
}

NormedSpace read_normed_space(const json& j) {
  return NormedSpace(positive_int(field(j, "dim"), "dim"), read_exponent(field(j, "p")));
}

Subspace read_subspace(const json& j) {
  const NormedSpace ambient = read_normed_space(field(j, "space"));
  const json& span = field(j, "spanning");
  if (!span.is_array() || span.empty()) throw SchemaError("spanning must be a nonempty array of vectors");
  std::vector<Vec> vs;
  for (const json& v : span) {
    vs.push_back(read_vector(v));
    if (vs.back().size() != ambient.dim()) throw SchemaError("spanning vector has the wrong dimension");
  }
  return make_subspace(ambient, vs);
}

Space read_space(const json& j) {
  if (j.is_object() && j.contains("spanning")) return Space(read_subspace(j));
  return Space(read_normed_space(j));
}

Vec read_vector(const json& j) {
  if (!j.is_array()) throw SchemaError("expected an array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i]);
  return v;
}

Mat read_matrix(const json& j) {
  if (!j.is_array() || j.empty()) throw SchemaError("expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  if (cols == 0) throw SchemaError("matrix rows must be nonempty arrays");
  Mat m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Vec row = read_vector(j[i]);
    if (static_cast<std::size_t>(row.size()) != cols) throw SchemaError("matrix rows differ in length");
    m.row(static_cast<Eigen::Index>(i)) = row.transpose();
  }
  return m;
}

LinearMap read_linear_map(const json& j) {
  return LinearMap(read_space(field(j, "domain")), read_space(field(j, "codomain")), read_matrix(field(j, "matrix")));
}

BilinearMap read_bilinear_map(const json& j) {
  const json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) throw SchemaError("coeffs must be an array of matrices");
  std::vector<Mat> slices;
  for (const json& s : coeffs) slices.push_back(read_matrix(s));
  return BilinearMap(read_space(field(j, "X")), read_space(field(j, "Y")), read_space(field(j, "Z")), std::move(slices));
}

TensorElement read_tensor(const json& j) {
  const json& terms = field(j, "terms");
  if (!terms.is_array()) throw SchemaError("terms must be an array");
  std::vector<TensorElement::Term> ts;
  for (const json& t : terms) ts.emplace_back(read_vector(field(t, "x")), read_vector(field(t, "y")));
  return TensorElement(read_space(field(j, "X")), read_space(field(j, "Y")), std::move(ts));
}

ExtendInput read_extend_input(const json& j, const OptimizerConfig& cfg) {
  const json& phi_json = field(j, "phi");
  const BilinearMap phi = read_bilinear_map(phi_json);
  const json& xj = field(phi_json, "X");
  const json& yj = field(phi_json, "Y");
  const Subspace m = xj.contains("spanning") ? read_subspace(xj) : whole_space(read_normed_space(xj));
  const Subspace n = yj.contains("spanning") ? read_subspace(yj) : whole_space(read_normed_space(yj));
  const auto projection = [&](const char* key, const Subspace& s) {
    if (j.contains(key)) {
      const NormedSpace a = s.ambient();
      return Projection(LinearMap(a, a, read_matrix(j.at(key))), s);
    }
    if (s.ambient().p().is_two()) return orthogonal_projection(s);
    if (s.k() == s.ambient().dim()) return Projection(LinearMap::identity(Space(s.ambient())), s);
    return min_norm_projection(s, cfg).projection;
  };
  Projection e = projection("E", m);
  Projection p = projection("P", n);
  return {phi, m, n, std::move(e), std::move(p)};
}

json write_exponent(LpExponent p) {
  if (p.is_inf()) return "inf";
  return p.value();
}

json write_subspace(const Subspace& s) {
  json span = json::array();
  for (int i = 0; i < s.k(); ++i) span.push_back(write_vector(s.basis().col(i)));
  return {{"space", {{"dim", s.ambient().dim()}, {"p", write_exponent(s.ambient().p())}}}, {"spanning", span}};
}

json write_space(const Space& s) {
  if (s.is_ambient()) return {{"dim", s.dim()}, {"p", write_exponent(s.p())}};
  return write_subspace(Subspace(s.ambient(), s.basis()));
}

json write_vector(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

json write_matrix(const Mat& m) {
  json a = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) a.push_back(write_vector(m.row(i).transpose()));
  return a;
}

json write_linear_map(const LinearMap& map) {
  return {{"domain", write_space(map.domain())}, {"codomain", write_space(map.codomain())},
          {"matrix", write_matrix(map.matrix())}};
}

json write_bilinear_map(const BilinearMap& phi) {
  json coeffs = json::array();
  for (const Mat& s : phi.slices()) coeffs.push_back(write_matrix(s));
  return {{"X", write_space(phi.x())}, {"Y", write_space(phi.y())}, {"Z", write_space(phi.z())}, {"coeffs", coeffs}};
}

json write_tensor(const TensorElement& t) {
  json terms = json::array();
  for (const auto& [x, y] : t.terms()) terms.push_back({{"x", write_vector(x)}, {"y", write_vector(y)}});
  return {{"X", write_space(t.x())}, {"Y", write_space(t.y())}, {"terms", terms}};
}

json write_extend_input(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Mat& e, const Mat& p) {
  json phi_json = write_bilinear_map(phi);
  phi_json["X"] = write_subspace(m);
  phi_json["Y"] = write_subspace(n);
  return {{"phi", phi_json}, {"E", write_matrix(e)}, {"P", write_matrix(p)}};
}

json write_estimate(const NormEstimate& e, const OptimizerConfig& cfg) {
  return {{"value", e.value},       {"exact", e.exact}, {"converged", e.converged}, {"agreeing", e.agreeing},
          {"restarts", cfg.restarts}, {"seed", cfg.seed}};
}

json write_estimate(const BilinearNormEstimate& e, const OptimizerConfig& cfg) {
  return {{"value", e.value},       {"exact", e.exact}, {"converged", e.converged}, {"agreeing", e.agreeing},
          {"restarts", cfg.restarts}, {"seed", cfg.seed}};
}

json write_crossnorm(const CrossnormReport& r) {
  return {{"injective", r.injective},   {"projective_upper", r.projective_upper},
          {"projective_dual_lower", r.projective_dual_lower}, {"gap", r.gap},
          {"certified", r.certified},   {"rounds", r.rounds},
          {"restarts", r.restarts},     {"seed", r.seed}};
}

json write_extension(const ExtensionResult& r) {
  return {{"phi_norm", r.phi_norm},
          {"phi_hat_norm", r.phi_hat_norm},
          {"E_norm", r.E_norm},
          {"P_norm", r.P_norm},
          {"restriction_residual", r.restriction_residual},
          {"phi_seed", r.phi_seed},
          {"phi_hat_seed", r.phi_hat_seed},
          {"E", write_matrix(r.E)},
          {"P", write_matrix(r.P)},
          {"phi_hat", write_bilinear_map(r.phi_hat)}};
}

std::pair<std::string, std::string> csv_row(const json& flat) {
  std::string header;
  std::string row;
  for (const auto& [key, value] : flat.items()) {
    if (value.is_structured()) continue;
    if (!header.empty()) {
      header += ',';
      row += ',';
    }
    header += key;
    row += flat_value(value);
  }
  return {header, row};
}

json load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + ": " + e.what());
  }
}

void save_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write " + path);
}

}  // namespace bilinext::io
