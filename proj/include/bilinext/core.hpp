#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace bilinext {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Malformed or inconsistent input (dimension mismatch, degenerate data).
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The operation is not defined for the given norm family (e.g. orthogonality off l2).
class UnsupportedError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// An optimizer exhausted its budget. Carries the best value it certified.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double best_value)
      : std::runtime_error(what), best_value_(best_value) {}
  double best_value() const noexcept { return best_value_; }

 private:
  double best_value_;
};

/// Exponent p of an lp norm, p in [1, inf].
class LpExponent {
 public:
  constexpr LpExponent() = default;
  explicit LpExponent(double p) : p_(p) {
    if (!(p >= 1.0)) throw InputError("norm exponent must satisfy p >= 1");
  }
  static LpExponent infinity() { return LpExponent(std::numeric_limits<double>::infinity()); }

  double value() const { return p_; }
  bool is_one() const { return p_ == 1.0; }
  bool is_two() const { return p_ == 2.0; }
  bool is_inf() const { return p_ == std::numeric_limits<double>::infinity(); }
  bool is_polyhedral() const { return is_one() || is_inf(); }

  /// Hoelder conjugate q with 1/p + 1/q = 1.
  LpExponent conjugate() const {
    if (is_one()) return infinity();
    if (is_inf()) return LpExponent(1.0);
    return LpExponent(p_ / (p_ - 1.0));
  }

  std::string to_string() const;

  friend bool operator==(const LpExponent&, const LpExponent&) = default;

 private:
  double p_ = 2.0;
};

/// Settings shared by every sup/inf search in the library.
struct OptimizerConfig {
  int restarts = 32;
  double tol = 1e-9;
  int max_iters = 10000;
  std::uint64_t seed = 0;
  /// Use closed-form / vertex-enumeration routes alongside the ascent when they exist.
  bool exact_routes = true;

  void validate() const;
  OptimizerConfig with_seed(std::uint64_t s) const {
    OptimizerConfig c = *this;
    c.seed = s;
    return c;
  }
};

/// splitmix64 finalizer; used to derive independent per-restart and per-trial seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

using Rng = std::mt19937_64;

Vec gaussian_vector(Rng& rng, int n);
Mat gaussian_matrix(Rng& rng, int rows, int cols);

}  // namespace bilinext
