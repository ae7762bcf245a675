// bilinext: run verification suites and one-off norm computations on JSON instances.

#include "bilinext/suite.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

using namespace bilinext;
using io::json;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::pair<int, int> parse_dims(const std::string& s) {
  try {
    const auto colon = s.find(':');
    if (colon == std::string::npos) return {1, std::stoi(s)};
    return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw UsageError("--dims expects N or MIN:MAX");
  }
}

LpExponent parse_p(const std::string& s) {
  if (s == "inf" || s == "infinity") return LpExponent::infinity();
  try {
    return LpExponent(std::stod(s));
  } catch (const InputError& e) {
    throw UsageError(e.what());
  } catch (const std::logic_error&) {
    throw UsageError("--p expects a number >= 1 or inf");
  }
}

std::map<std::string, double> parse_tolerances(const std::vector<std::string>& items) {
  std::map<std::string, double> out;
  for (const std::string& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("--tol expects KEY=VAL");
    try {
      out[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::logic_error&) {
      throw UsageError("--tol value for " + item.substr(0, eq) + " is not a number");
    }
  }
  return out;
}

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f || !(f << text)) throw std::runtime_error("cannot write " + out_path);
}

json compute(const std::string& command, const json& input, const OptimizerConfig& cfg) {
  if (command == "op-norm") {
    const LinearMap map = io::read_linear_map(input);
    json r = io::write_estimate(estimate_operator_norm(map, cfg), cfg);
    r["schema"] = "bilinext.op_norm/1";
    return r;
  }
  if (command == "bilinear-norm") {
    const BilinearMap phi = io::read_bilinear_map(input);
    json r = io::write_estimate(estimate_bilinear_norm(phi, cfg), cfg);
    r["schema"] = "bilinext.bilinear_norm/1";
    return r;
  }
  if (command == "tensor-norm") {
    json r = io::write_crossnorm(projective_norm(io::read_tensor(input), cfg));
    r["schema"] = "bilinext.crossnorm/1";
    return r;
  }
  const io::ExtendInput in = io::read_extend_input(input, cfg);
  json r = io::write_extension(extend_bilinear(in.phi, in.m, in.n, in.e, in.p, cfg));
  r["schema"] = "bilinext.extension/1";
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Norms, crossnorms and extensions of bilinear maps on finite-dimensional lp spaces"};
  app.require_subcommand(1);

  SuiteSpec spec;
  std::string dims = "1:4";
  std::vector<std::string> p_values;
  std::vector<std::string> tolerances;
  std::string out_path;
  bool csv = false;
  int trials = 0;

  CLI::App* suite = app.add_subcommand("suite", "Run a named verification suite");
  std::string ids;
  for (const std::string& id : suite_ids()) ids += (ids.empty() ? "" : ", ") + id;
  suite->add_option("--id", spec.suite_id, "Suite id: " + ids)->required();
  suite->add_option("--trials", trials, "Number of random instances (default: per suite)");
  suite->add_option("--dims", dims, "Dimension bound N or range MIN:MAX within [1, 8]");
  suite->add_option("--p", p_values, "Norm exponents (repeatable; number or inf)");
  suite->add_option("--seed", spec.seed, "Base seed");
  suite->add_option("--tol", tolerances, "Tolerance override KEY=VAL (repeatable)");
  suite->add_option("--out", out_path, "Write the report here instead of stdout");
  suite->add_flag("--csv", csv, "Emit CSV instead of JSON");

  CLI::App* comp = app.add_subcommand("compute", "Evaluate one instance file");
  std::string command;
  std::string input_path;
  std::uint64_t seed = 0;
  comp->add_option("command", command, "op-norm | bilinear-norm | tensor-norm | extend")
      ->required()
      ->check(CLI::IsMember({"op-norm", "bilinear-norm", "tensor-norm", "extend"}));
  comp->add_option("file", input_path, "Input JSON")->required();
  comp->add_option("--out", out_path, "Write the result here instead of stdout");
  comp->add_option("--seed", seed, "Optimizer seed");
  comp->add_flag("--csv", csv, "Emit a CSV header and row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*suite) {
      if (std::find(suite_ids().begin(), suite_ids().end(), spec.suite_id) == suite_ids().end())
        throw UsageError("unknown suite id \"" + spec.suite_id + "\"; expected one of " + ids);
      spec.trials = suite->count("--trials") > 0 ? trials : default_trials(spec.suite_id);
      std::tie(spec.dim_min, spec.dim_max) = parse_dims(dims);
      for (const std::string& p : p_values) spec.p_values.push_back(parse_p(p));
      spec.tolerances = parse_tolerances(tolerances);
      try {
        validate(spec);
      } catch (const InputError& e) {
        throw UsageError(e.what());
      }
      const SuiteReport report = run_suite(spec);
      emit(out_path, csv ? to_csv(report) : to_json(report, spec).dump(2) + "\n");
      if (!report.pass())
        std::cerr << report.failures.size() << " invariant failure(s) in suite " << spec.suite_id << '\n';
      return report.pass() ? kExitPass : kExitFail;
    }

    json input;
    try {
      input = io::load_file(input_path);
    } catch (const io::SchemaError& e) {
      throw UsageError(e.what());
    }
    json result;
    try {
      result = compute(command, input, OptimizerConfig{}.with_seed(seed));
    } catch (const io::SchemaError& e) {
      throw UsageError(std::string(input_path) + ": " + e.what());
    } catch (const InputError& e) {
      throw UsageError(std::string(input_path) + ": " + e.what());
    }
    if (csv) {
      const auto [header, row] = io::csv_row(result);
      emit(out_path, header + "\n" + row + "\n");
    } else {
      emit(out_path, result.dump(2) + "\n");
    }
    return kExitPass;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ConvergenceError& e) {
    std::cerr << "did not converge: " << e.what() << " (best value " << e.best_value() << ")\n";
    return kExitFail;
  } catch (const std::runtime_error& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitUsage;
  }
}
