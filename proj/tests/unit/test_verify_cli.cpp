#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bilinext/suite.hpp"

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

using namespace bilinext;
using io::json;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "bilinext_unit";
  fs::create_directories(dir);
  return dir / name;
}

int run_cli(const std::string& args, const fs::path& out) {
  const std::string cmd = std::string(BILINEXT_CLI) + " " + args + " > " + out.string() + " 2> " + out.string() + ".err";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

json strip_timing(json j) {
  j.erase("timing");
  return j;
}

}  // namespace

TEST_CASE("spaces and maps survive a JSON round trip") {
  Rng rng(51);
  const NormedSpace x(3, LpExponent::infinity());
  const Subspace m = make_subspace(NormedSpace(4, 1.5), std::vector<Vec>{gaussian_vector(rng, 4), gaussian_vector(rng, 4)});
  const BilinearMap phi(x, Space(m), NormedSpace(2, 1.0), {gaussian_matrix(rng, 3, 2), gaussian_matrix(rng, 3, 2)});

  const json j = io::write_bilinear_map(phi);
  CHECK(j["X"]["p"] == "inf");
  const BilinearMap back = io::read_bilinear_map(json::parse(j.dump()));
  CHECK(back.distance(phi) == 0.0);
  CHECK(back.x().same_as(phi.x()));
  CHECK(back.y().same_as(phi.y()));

  const LinearMap map(x, NormedSpace(2, 2.0), gaussian_matrix(rng, 2, 3));
  CHECK(io::read_linear_map(io::write_linear_map(map)).matrix() == map.matrix());

  const TensorElement t(x, x, {{gaussian_vector(rng, 3), gaussian_vector(rng, 3)}});
  CHECK(io::read_tensor(io::write_tensor(t)).equals(t, 0.0));
  CHECK(io::read_space(io::write_space(Space(m))).same_as(Space(m)));
}

TEST_CASE("schema violations are reported as SchemaError") {
  CHECK_THROWS_AS(io::read_normed_space(json{{"dim", 2}}), io::SchemaError);
  CHECK_THROWS_AS(io::read_normed_space(json{{"dim", 2}, {"p", 0.5}}), io::SchemaError);
  CHECK_THROWS_AS(io::read_normed_space(json{{"dim", 0}, {"p", 2}}), io::SchemaError);
  CHECK_THROWS_AS(io::read_normed_space(json{{"dim", 2}, {"p", "two"}}), io::SchemaError);
  CHECK_THROWS_AS(io::read_matrix(json::parse("[[1, 2], [3]]")), io::SchemaError);
  CHECK_THROWS_AS(io::read_vector(json::parse("[1, \"a\"]")), io::SchemaError);
  CHECK(io::read_exponent(json("inf")).is_inf());
  CHECK(io::read_exponent(json(3)).value() == 3.0);
}

TEST_CASE("extend inputs default their projections") {
  const json phi = {{"X", {{"space", {{"dim", 2}, {"p", 2}}}, {"spanning", {{0, 1}}}}},
                    {"Y", {{"dim", 2}, {"p", 2}}},
                    {"Z", {{"dim", 1}, {"p", 2}}},
                    {"coeffs", {{{1, 0}}}}};
  const io::ExtendInput in = io::read_extend_input({{"phi", phi}}, OptimizerConfig{});
  CHECK(in.m.k() == 1);
  CHECK(in.n.k() == 2);
  CHECK((in.e.matrix() - (Mat(2, 2) << 0, 0, 0, 1).finished()).norm() < 1e-12);
  CHECK((in.p.matrix() - Mat::Identity(2, 2)).norm() < 1e-12);

  const json bad = {{"phi", phi}, {"E", {{1, 0}, {0, 1}}}};
  CHECK_THROWS_AS(io::read_extend_input(bad, OptimizerConfig{}), InputError);
}

TEST_CASE("csv rows keep scalar fields in order") {
  const auto [header, row] = io::csv_row({{"a", 1}, {"b", "x"}, {"c", {1, 2}}});
  CHECK(header == "a,b");
  CHECK(row == "1,x");
}

TEST_CASE("suite specs are validated") {
  SuiteSpec spec;
  spec.suite_id = "crossnorms";
  spec.trials = 0;
  CHECK_THROWS_AS(validate(spec), InputError);
  spec.trials = 1;
  spec.dim_max = 9;
  CHECK_THROWS_AS(validate(spec), InputError);
  spec.dim_max = 4;
  spec.tolerances["nonsense"] = 1.0;
  CHECK_THROWS_AS(validate(spec), InputError);
  spec.tolerances.clear();
  CHECK_NOTHROW(validate(spec));
  spec.suite_id = "cor53";
  spec.p_values = {LpExponent(1.0)};
  CHECK_THROWS_AS(validate(spec), InputError);
  spec.suite_id = "unknown";
  CHECK_THROWS_AS(validate(spec), InputError);
  CHECK(suite_ids().size() == 9);
}

TEST_CASE("suite reports are deterministic apart from timing") {
  for (const std::string& id : suite_ids()) {
    SuiteSpec spec;
    spec.suite_id = id;
    spec.trials = std::min(6, default_trials(id) * 6);
    spec.seed = 17;
    const json a = to_json(run_suite(spec), spec);
    const json b = to_json(run_suite(spec), spec);
    CHECK_MESSAGE(strip_timing(a).dump() == strip_timing(b).dump(), id);
    CHECK_MESSAGE(a["pass"] == true, id);
    CHECK(a.contains("timing"));
  }
}

TEST_CASE("a tightened tolerance turns into a failure with a replayable instance") {
  SuiteSpec spec;
  spec.suite_id = "prop42";
  spec.trials = 4;
  spec.tolerances["curry_isometry"] = 0.0;
  spec.p_values = {LpExponent(3.0)};
  const SuiteReport r = run_suite(spec);
  REQUIRE(!r.pass());
  const SuiteFailure& f = r.failures.front();
  CHECK(f.invariant == "curry_isometry");
  CHECK(f.instance["command"] == "bilinear-norm");
  CHECK_NOTHROW(io::read_bilinear_map(f.instance["input"]));
  CHECK(to_csv(r).rfind("suite_id,invariant,checked,worst,tolerance,failures\n", 0) == 0);
}

TEST_CASE("command line exit codes") {
  const fs::path out = scratch("out.json");
  CHECK(run_cli("suite --id counterexample", out) == 0);
  const json report = io::load_file(out.string());
  CHECK(report["summary"]["E_norm"].get<double>() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  CHECK(run_cli("suite --id nope", out) == 2);
  CHECK(run_cli("suite --id crossnorms --trials 0", out) == 2);
  CHECK(run_cli("suite --id cor53 --p 1", out) == 2);
  CHECK(run_cli("suite --id prop42 --trials 3 --p 3 --tol curry_isometry=0", out) == 1);
  CHECK(run_cli("suite --id thm52 --trials 3 --dims 3 --p 2 --seed 7 --csv", out) == 0);
  CHECK(run_cli("frobnicate", out) == 2);

  const fs::path input = scratch("form.json");
  io::save_file(input.string(), {{"X", {{"dim", 2}, {"p", "inf"}}},
                                 {"Y", {{"dim", 2}, {"p", "inf"}}},
                                 {"Z", {{"dim", 1}, {"p", 2}}},
                                 {"coeffs", {{{1, 1}, {1, -1}}}}});
  CHECK(run_cli("compute bilinear-norm " + input.string(), out) == 0);
  CHECK(io::load_file(out.string())["value"].get<double>() == doctest::Approx(2.0));
  CHECK(run_cli("compute tensor-norm " + input.string(), out) == 2);
  CHECK(run_cli("compute op-norm " + scratch("missing.json").string(), out) == 2);
  CHECK(run_cli("compute bilinear-norm " + input.string() + " --csv", out) == 0);
}
