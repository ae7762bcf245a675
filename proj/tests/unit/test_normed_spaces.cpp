#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "bilinext/linear_map.hpp"
#include "oracles.hpp"

using namespace bilinext;

namespace {

const double kPs[] = {1.0, 1.5, 2.0, 3.0, std::numeric_limits<double>::infinity()};

LpExponent exponent(double p) { return std::isinf(p) ? LpExponent::infinity() : LpExponent(p); }

}  // namespace

TEST_CASE("exponents") {
  CHECK_THROWS_AS(LpExponent(0.5), InputError);
  CHECK_THROWS_AS(LpExponent(std::nan("")), InputError);
  CHECK(LpExponent(1.0).conjugate().is_inf());
  CHECK(LpExponent::infinity().conjugate().is_one());
  CHECK(LpExponent(3.0).conjugate().value() == doctest::Approx(1.5));
  CHECK_THROWS_AS(NormedSpace(0, 2.0), InputError);
}

TEST_CASE("lp norms match hand values") {
  const Vec v = (Vec(3) << 3.0, -4.0, 0.0).finished();
  CHECK(lp_norm(v, LpExponent(1.0)) == 7.0);
  CHECK(lp_norm(v, LpExponent(2.0)) == doctest::Approx(5.0));
  CHECK(lp_norm(v, LpExponent::infinity()) == 4.0);
  CHECK(lp_norm(v, LpExponent(3.0)) == doctest::Approx(std::cbrt(91.0)));
  CHECK_THROWS_AS(vector_norm(NormedSpace(2, 2.0), v), InputError);
}

TEST_CASE("norm axioms hold on random vectors") {
  Rng rng(11);
  for (double pv : kPs) {
    const LpExponent p = exponent(pv);
    for (int trial = 0; trial < 50; ++trial) {
      const Vec a = gaussian_vector(rng, 5);
      const Vec b = gaussian_vector(rng, 5);
      CHECK(lp_norm(a + b, p) <= lp_norm(a, p) + lp_norm(b, p) + 1e-12);
      CHECK(lp_norm(-2.5 * a, p) == doctest::Approx(2.5 * lp_norm(a, p)));
      CHECK(lp_norm(a, p) == doctest::Approx(oracle::lp(a, pv)));
    }
    CHECK(lp_norm(Vec::Zero(4), p) == 0.0);
  }
}

TEST_CASE("norming vectors attain the dual pairing") {
  Rng rng(12);
  for (double pv : kPs) {
    const LpExponent p = exponent(pv);
    for (int trial = 0; trial < 20; ++trial) {
      const Vec x = gaussian_vector(rng, 4);
      const Vec z = norming_vector(x, p);
      CHECK(lp_norm(z, p.conjugate()) <= 1.0 + 1e-12);
      CHECK(z.dot(x) == doctest::Approx(lp_norm(x, p)));
    }
  }
}

TEST_CASE("subspaces are orthonormalized and drop dependent vectors") {
  const NormedSpace x(4, 1.0);
  const Vec a = (Vec(4) << 1, 1, 0, 0).finished();
  const Vec b = (Vec(4) << 0, 1, 1, 0).finished();
  const Subspace s = make_subspace(x, std::vector<Vec>{a, b, a + 2.0 * b});
  CHECK(s.k() == 2);
  CHECK((s.basis().transpose() * s.basis() - Mat::Identity(2, 2)).norm() < 1e-12);
  CHECK(s.residual(a - b) < 1e-12);
  CHECK(s.residual(Vec::Unit(4, 3)) == doctest::Approx(1.0));

  const Subspace c = orthogonal_complement(s);
  CHECK(c.k() == 2);
  CHECK((s.basis().transpose() * c.basis()).norm() < 1e-12);
  CHECK_THROWS_AS(orthogonal_complement(whole_space(x)), InputError);
  CHECK_THROWS_AS(make_subspace(x, std::vector<Vec>{Vec::Zero(4)}), InputError);
  CHECK_THROWS_AS(Subspace(x, Mat::Ones(4, 1)), InputError);
}

TEST_CASE("subspace coordinates carry the inherited norm") {
  Rng rng(13);
  const NormedSpace x(5, 3.0);
  const Subspace s = make_subspace(x, std::vector<Vec>{gaussian_vector(rng, 5), gaussian_vector(rng, 5)});
  const Space sp(s);
  CHECK(sp.dim() == 2);
  CHECK(!sp.is_ambient());
  const Vec a = gaussian_vector(rng, 2);
  CHECK(sp.norm(a) == doctest::Approx(oracle::lp(s.basis() * a, 3.0)));
  CHECK(sp.same_as(Space(s)));
  CHECK(!sp.same_as(Space(x)));
}

TEST_CASE("operator norms match closed forms") {
  Rng rng(14);
  for (int trial = 0; trial < 10; ++trial) {
    const int m = 2 + trial % 3;
    const int n = 1 + trial % 4;
    const Mat a = gaussian_matrix(rng, m, n);
    const OptimizerConfig cfg = OptimizerConfig{}.with_seed(static_cast<std::uint64_t>(trial));

    const auto norm = [&](double p, double q) {
      return operator_norm(LinearMap(NormedSpace(n, exponent(p)), NormedSpace(m, exponent(q)), a), cfg);
    };
    CHECK(norm(2, 2) == doctest::Approx(oracle::spectral(a)).epsilon(1e-9));

    double col1 = 0, col3 = 0, row_q = 0;
    for (int j = 0; j < n; ++j) {
      col1 = std::max(col1, a.col(j).cwiseAbs().sum());
      col3 = std::max(col3, oracle::lp(a.col(j), 3.0));
    }
    for (int i = 0; i < m; ++i) row_q = std::max(row_q, oracle::lp(a.row(i).transpose(), 1.5));
    CHECK(norm(1, 1) == doctest::Approx(col1).epsilon(1e-9));
    CHECK(norm(1, 3) == doctest::Approx(col3).epsilon(1e-9));
    CHECK(norm(3, std::numeric_limits<double>::infinity()) == doctest::Approx(row_q).epsilon(1e-9));

    double inf_to_one = 0;
    for (const Vec& s : oracle::sign_vectors(n)) inf_to_one = std::max(inf_to_one, (a * s).cwiseAbs().sum());
    CHECK(norm(std::numeric_limits<double>::infinity(), 1) == doctest::Approx(inf_to_one).epsilon(1e-9));
  }
}

TEST_CASE("l3 operator norm lies between sampling and interpolation bounds") {
  Rng rng(15);
  const Mat a = gaussian_matrix(rng, 3, 3);
  const NormedSpace x(3, 3.0);
  const double value = operator_norm(LinearMap(x, x, a), OptimizerConfig{});
  double sampled = 0;
  for (int i = 0; i < 20000; ++i) {
    const Vec v = gaussian_vector(rng, 3);
    sampled = std::max(sampled, oracle::lp(a * v, 3.0) / oracle::lp(v, 3.0));
  }
  double one = 0, inf = 0;
  for (int j = 0; j < 3; ++j) one = std::max(one, a.col(j).cwiseAbs().sum());
  for (int i = 0; i < 3; ++i) inf = std::max(inf, a.row(i).cwiseAbs().sum());
  CHECK(value >= sampled - 1e-12);
  CHECK(value <= std::pow(one, 1.0 / 3.0) * std::pow(inf, 2.0 / 3.0) + 1e-12);
}

TEST_CASE("operator norm is homogeneous, subadditive and seed-reproducible") {
  Rng rng(16);
  const NormedSpace x(3, 1.5);
  const NormedSpace y(4, 3.0);
  const Mat a = gaussian_matrix(rng, 4, 3);
  const Mat b = gaussian_matrix(rng, 4, 3);
  const OptimizerConfig cfg = OptimizerConfig{}.with_seed(5);
  const double na = operator_norm(LinearMap(x, y, a), cfg);
  const double nb = operator_norm(LinearMap(x, y, b), cfg);
  CHECK(operator_norm(LinearMap(x, y, -3.0 * a), cfg) == doctest::Approx(3.0 * na).epsilon(1e-7));
  CHECK(operator_norm(LinearMap(x, y, a + b), cfg) <= na + nb + 1e-7);
  CHECK(operator_norm(LinearMap(x, y, a), cfg) == na);
  CHECK(operator_norm(LinearMap(x, y, Mat::Zero(4, 3)), cfg) == 0.0);

  const NormEstimate e = estimate_operator_norm(LinearMap(x, y, a), cfg);
  CHECK(e.argmax.size() == x.dim());
  CHECK(lp_norm(e.argmax, x.p()) == doctest::Approx(1.0));
  CHECK(lp_norm(a * e.argmax, y.p()) == doctest::Approx(e.value).epsilon(1e-9));
}

TEST_CASE("dual norms are conjugate norms") {
  Rng rng(17);
  for (double pv : kPs) {
    const NormedSpace x(4, exponent(pv));
    const Vec f = gaussian_vector(rng, 4);
    const double q = std::isinf(pv) ? 1.0 : (pv == 1.0 ? std::numeric_limits<double>::infinity() : pv / (pv - 1.0));
    CHECK(dual_norm(x, LinearMap(x, NormedSpace(1, 2.0), f.transpose())) == doctest::Approx(oracle::lp(f, q)));
  }
}

TEST_CASE("projections are validated idempotents") {
  const NormedSpace x(3, 2.0);
  const Subspace m = make_subspace(x, std::vector<Vec>{Vec::Unit(3, 0)});
  CHECK_THROWS_AS(Projection(LinearMap(x, x, 2.0 * Mat::Identity(3, 3)), m), InputError);
  Mat wrong_range = Mat::Zero(3, 3);
  wrong_range(1, 1) = 1.0;
  CHECK_THROWS_AS(Projection(LinearMap(x, x, wrong_range), m), InputError);

  const Projection e = orthogonal_projection(m);
  CHECK(operator_norm(e.map(), OptimizerConfig{}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(orthogonal_projection(make_subspace(NormedSpace(3, 1.0), std::vector<Vec>{Vec::Unit(3, 0)})),
                  UnsupportedError);
}

TEST_CASE("projections have norm at least one") {
  Rng rng(18);
  for (double pv : kPs) {
    const NormedSpace x(4, exponent(pv));
    const Subspace m = make_subspace(x, std::vector<Vec>{gaussian_vector(rng, 4), gaussian_vector(rng, 4)});
    const Subspace k = make_subspace(x, std::vector<Vec>{gaussian_vector(rng, 4), gaussian_vector(rng, 4)});
    const Projection e = projection_onto(m, k);
    CHECK((e.matrix() * e.matrix() - e.matrix()).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(operator_norm(e.map(), OptimizerConfig{}) >= 1.0 - 1e-9);
  }
}

TEST_CASE("minimal projections onto the diagonal line") {
  // The diagonal of l_inf^n and of l1^n both admit projections of norm one.
  for (double pv : {1.0, std::numeric_limits<double>::infinity()}) {
    const NormedSpace x(3, exponent(pv));
    const Subspace m = make_subspace(x, std::vector<Vec>{Vec::Ones(3)});
    const MinNormProjection best = min_norm_projection(m, OptimizerConfig{});
    CHECK(best.norm >= 1.0 - 1e-9);
    CHECK(best.norm <= 1.0 + 1e-3);
    CHECK(operator_norm(best.projection.map(), OptimizerConfig{}) == doctest::Approx(best.norm).epsilon(1e-6));
  }
}
