#pragma once

#include "bilinext/extension.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace bilinext::io {

using json = nlohmann::json;

/// Malformed JSON or a value that does not fit the schema.
class SchemaError : public InputError {
 public:
  using InputError::InputError;
};

// Readers. Spaces are {"dim": n, "p": 2} with p a number >= 1 or "inf"; anywhere a space is
// expected a subspace {"space": {...}, "spanning": [[...], ...]} is accepted too.
LpExponent read_exponent(const json& j);
NormedSpace read_normed_space(const json& j);
Subspace read_subspace(const json& j);
Space read_space(const json& j);
Vec read_vector(const json& j);
Mat read_matrix(const json& j);
LinearMap read_linear_map(const json& j);
BilinearMap read_bilinear_map(const json& j);
TensorElement read_tensor(const json& j);

/// {"phi": bilinear map on subspaces M x N, "E": matrix, "P": matrix}. Missing projections
/// default to orthogonal ones on l2 and to min_norm_projection otherwise.
struct ExtendInput {
  BilinearMap phi;
  Subspace m;
  Subspace n;
  Projection e;
  Projection p;
};
ExtendInput read_extend_input(const json& j, const OptimizerConfig& cfg);

// Writers, inverse to the readers.
json write_exponent(LpExponent p);
json write_space(const Space& s);
json write_subspace(const Subspace& s);
json write_vector(const Vec& v);
json write_matrix(const Mat& m);
json write_linear_map(const LinearMap& map);
json write_bilinear_map(const BilinearMap& phi);
json write_tensor(const TensorElement& t);
json write_extend_input(const BilinearMap& phi, const Subspace& m, const Subspace& n, const Mat& e, const Mat& p);

json write_estimate(const NormEstimate& e, const OptimizerConfig& cfg);
json write_estimate(const BilinearNormEstimate& e, const OptimizerConfig& cfg);
json write_crossnorm(const CrossnormReport& r);
json write_extension(const ExtensionResult& r);

/// One-line CSV (header, row) pair for a flat JSON object; nested values are skipped.
std::pair<std::string, std::string> csv_row(const json& flat);

json load_file(const std::string& path);
void save_file(const std::string& path, const json& j);

}  // namespace bilinext::io
