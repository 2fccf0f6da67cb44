#include <doctest.h>

#include <array>
#include <cmath>

#include "crrr/estimators.hpp"
#include "crrr/rng.hpp"
#include "crrr/simulate.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace crrr;

namespace {

RankVector as_ranks(const Vector& values, RankKind kind = RankKind::conditional) {
  RankVector r;
  r.values = values;
  r.kind = kind;
  return r;
}

}  // namespace

TEST_CASE("correlation of a vector with itself is exactly 1") {
  Vector u(5);
  u << 0.1, 0.9, 0.4, 0.6, 0.2;
  const RankVector r = as_ranks(u);
  CHECK(pearson_slope_corr(r, r).value == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(restricted_corr(r, r).value == doctest::Approx(1.0).epsilon(1e-14));
  const auto reg = regression_slopes(r, r);
  CHECK(reg.unrestricted.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reg.restricted.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reg.reverse_restricted.value == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("RRR slope equals brute-force Spearman on the 20-row fixture") {
  const Dataset data = fixtures::table3_dataset();
  const RankVector u = marginal_ranks(data.y);
  const RankVector v = marginal_ranks(data.w, Variable::w);
  const SlopeEstimate rrr = pearson_slope_corr(u, v);
  CHECK(rrr.method == Method::rrr);
  const std::vector<double> yv(data.y.data(), data.y.data() + 20);
  const std::vector<double> wv(data.w.data(), data.w.data() + 20);
  CHECK(std::fabs(rrr.value - oracles::spearman(yv, wv)) < 1e-10);
}

TEST_CASE("Spearman identity holds on random tie-free datasets") {
  rng::Stream stream(1234, 0);
  for (int rep = 0; rep < 25; ++rep) {
    const Index n = 11 + static_cast<Index>(stream.next_below(60));
    Vector y(n), w(n);
    for (Index i = 0; i < n; ++i) {
      y[i] = stream.next_normal();
      w[i] = 0.3 * y[i] + stream.next_normal();
    }
    const SlopeEstimate rrr = pearson_slope_corr(marginal_ranks(y), marginal_ranks(w, Variable::w));
    const std::vector<double> yv(y.data(), y.data() + n);
    const std::vector<double> wv(w.data(), w.data() + n);
    CHECK(std::fabs(rrr.value - oracles::spearman(yv, wv)) < 1e-10);
  }
}

TEST_CASE("fully restricted estimator on a uniform grid gives 1 - 1/n^2") {
  for (Index n : {32, 100, 1000}) {
    Vector u(n);
    for (Index i = 0; i < n; ++i) u[i] = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    const RankVector r = as_ranks(u);
    const double value = fully_restricted(r, r).value;
    const double expected = 1.0 - 1.0 / (static_cast<double>(n) * static_cast<double>(n));
    CHECK(value == doctest::Approx(expected).epsilon(1e-10));
    CHECK(std::fabs(value - 1.0) < 1e-3);
  }
}

TEST_CASE("fully restricted estimator is near zero under independence") {
  const Index n = 1000000;
  rng::Stream stream(5557, 0);
  Vector u(n), v(n);
  for (Index i = 0; i < n; ++i) {
    u[i] = stream.next_uniform();
    v[i] = stream.next_uniform();
  }
  CHECK(std::fabs(fully_restricted(as_ranks(u), as_ranks(v)).value) < 0.004);
}

TEST_CASE("correlation estimators stay in [-1,1]; the fully restricted one can leave it") {
  // ranks piled near the endpoints push 12*mean((u-.5)(v-.5)) above 1
  const Index n = 40;
  Vector u(n);
  for (Index i = 0; i < n; ++i) u[i] = i < n / 2 ? 0.001 : 1.0;
  const RankVector r = as_ranks(u);
  CHECK(fully_restricted(r, r).value > 1.0);
  CHECK(pearson_slope_corr(r, r).value <= 1.0);
  CHECK(pearson_slope_corr(r, r).value >= -1.0);
}

TEST_CASE("zero variance raises DegenerateData") {
  Vector c = Vector::Constant(10, 0.4);
  Vector v(10);
  for (Index i = 0; i < 10; ++i) v[i] = 0.1 * static_cast<double>(i) + 0.05;
  CHECK_THROWS_AS(pearson_slope_corr(as_ranks(c), as_ranks(v)), DegenerateData);
  Vector half = Vector::Constant(10, 0.5);
  CHECK_THROWS_AS(restricted_corr(as_ranks(half), as_ranks(v)), DegenerateData);
}

TEST_CASE("oracle ranks reproduce the two-country estimands at both shock sizes") {
  const Index n = 2000000;
  for (double delta : {0.0, 12.0}) {
    const DgpSpec spec{DgpKind::conceptual, delta, 0.0, n, 20240615};
    const Dataset data = gen_data(spec);
    const OracleRanks oracle = oracle_ranks(spec, data);

    const double rrr = pearson_slope_corr(oracle.u_marg, oracle.v_marg).value;
    const double crrr = pearson_slope_corr(oracle.u, oracle.v).value;
    const double crrr_fr = fully_restricted(oracle.u, oracle.v).value;
    const double crrr_rc = restricted_corr(oracle.u, oracle.v).value;
    const auto reg = regression_slopes(oracle.u, oracle.v);
    const Matrix covars = data.x.rightCols(1);
    const double rrrx_a = rrrx_additive(oracle.u_marg, oracle.v_marg, covars).value;
    const double rrrx_i = rrrx_interacted(oracle.u_marg, oracle.v_marg, covars).value;

    if (delta == 0.0) {
      CHECK(std::fabs(rrr - 0.58) < 0.005);
      CHECK(std::fabs(rrrx_a - 0.58) < 0.01);
      CHECK(std::fabs(rrrx_i - 0.58) < 0.01);
      CHECK(std::fabs(rrr - crrr) < 0.01);  // no between-group component
    } else {
      CHECK(std::fabs(rrr - 0.32) < 0.005);
      CHECK(std::fabs(rrrx_a - 1.07) < 0.01);
      CHECK(std::fabs(rrrx_i - 1.07) < 0.01);
      const double bg = between_group(pearson_slope_corr(oracle.u_marg, oracle.v_marg),
                                      pearson_slope_corr(oracle.u, oracle.v));
      CHECK(std::fabs(bg - (0.32 - 0.58)) < 0.01);
    }
    CHECK(std::fabs(crrr - 0.58) < 0.005);
    CHECK(std::fabs(crrr_fr - 0.58) < 0.005);
    CHECK(std::fabs(crrr_rc - 0.58) < 0.005);
    CHECK(std::fabs(reg.unrestricted.value - 0.58) < 0.01);
    CHECK(std::fabs(reg.restricted.value - 0.58) < 0.01);
    CHECK(std::fabs(reg.reverse_restricted.value - 0.58) < 0.01);
  }
}

TEST_CASE("subgroup slopes match the two-country subgroup table") {
  const Index n = 2000000;
  const DgpSpec spec{DgpKind::conceptual, 12.0, 0.0, n, 77001};
  const Dataset data = gen_data(spec);
  const OracleRanks oracle = oracle_ranks(spec, data);

  const auto rrr_groups = subgroup_crrr(oracle.u_marg, oracle.v_marg, data.group, Method::rrr);
  REQUIRE(rrr_groups.size() == 2);
  CHECK(std::fabs(rrr_groups[0].value - 1.06) < 0.01);  // group "0"
  CHECK(std::fabs(rrr_groups[1].value - 1.07) < 0.01);  // group "1"

  const auto crrr_groups = subgroup_crrr(oracle.u, oracle.v, data.group, Method::crrr_corr);
  CHECK(std::fabs(crrr_groups[0].value - 0.58) < 0.01);
  CHECK(std::fabs(crrr_groups[1].value - 0.58) < 0.01);
}

TEST_CASE("a single group reproduces the pooled estimator exactly") {
  const Dataset data = fixtures::table3_dataset();
  const RankVector u = marginal_ranks(data.y);
  const RankVector v = marginal_ranks(data.w, Variable::w);
  const std::vector<std::string> one_group(20, "all");
  const auto sub = subgroup_crrr(u, v, one_group, Method::rrr, 5);
  REQUIRE(sub.size() == 1);
  // tie-free marginal ranks have equal variances, so slope == correlation
  CHECK(sub[0].value == doctest::Approx(pearson_slope_corr(u, v).value).epsilon(1e-12));

  const auto sub_fr = subgroup_crrr(u, v, one_group, Method::crrr_fully_restricted, 5);
  CHECK(sub_fr[0].value == doctest::Approx(fully_restricted(u, v).value).epsilon(1e-14));
}

TEST_CASE("undersized groups are rejected with their label") {
  const Dataset data = fixtures::table3_dataset();
  const RankVector u = marginal_ranks(data.y);
  const RankVector v = marginal_ranks(data.w, Variable::w);
  CHECK_THROWS_AS(subgroup_crrr(u, v, data.group, Method::crrr_corr, 30), GroupTooSmall);
}

TEST_CASE("pooled fully restricted equals the group-size-weighted average of group values") {
  const Dataset data = fixtures::table3_dataset();
  RankVector u, v;
  u.values = Eigen::Map<const Vector>(fixtures::kU.data(), 20);
  v.values = Eigen::Map<const Vector>(fixtures::kV.data(), 20);
  const double pooled = fully_restricted(u, v).value;
  const auto groups = subgroup_crrr(u, v, data.group, Method::crrr_fully_restricted, 5);
  double weighted = 0.0;
  for (const auto& g : groups) {
    weighted += (static_cast<double>(g.n) / 20.0) * g.value;
  }
  CHECK(pooled == doctest::Approx(weighted).epsilon(1e-14));
}

TEST_CASE("between_group is zero for equal estimates and validates sample sizes") {
  SlopeEstimate a{Method::rrr, 0.32, 100, std::nullopt};
  SlopeEstimate b{Method::crrr_corr, 0.58, 100, std::nullopt};
  CHECK(between_group(a, a) == 0.0);
  CHECK(between_group(a, b) == doctest::Approx(-0.26));
  SlopeEstimate c = b;
  c.n = 99;
  CHECK_THROWS_AS(between_group(a, c), InputMismatch);
}

TEST_CASE("irrelevant covariate leaves the rrrx slope near the rrr slope") {
  const Index n = 200000;
  rng::Stream stream(4242, 0);
  Vector y(n), w(n);
  Matrix noise(n, 1);
  for (Index i = 0; i < n; ++i) {
    y[i] = stream.next_normal();
    w[i] = 0.6 * y[i] + 0.8 * stream.next_normal();
    noise(i, 0) = stream.next_normal();
  }
  const RankVector u = marginal_ranks(y);
  const RankVector v = marginal_ranks(w, Variable::w);
  const double rrr = pearson_slope_corr(u, v).value;
  CHECK(std::fabs(rrrx_additive(u, v, noise).value - rrr) < 0.01);
  // with no interaction in the data-generating process both rrrx variants agree
  CHECK(std::fabs(rrrx_interacted(u, v, noise).value - rrrx_additive(u, v, noise).value) < 0.01);
}

TEST_CASE("rank-deficient rrrx design raises DegenerateData") {
  const Index n = 100;
  rng::Stream stream(11, 0);
  Vector y(n), w(n);
  Matrix covars(n, 2);
  for (Index i = 0; i < n; ++i) {
    y[i] = stream.next_normal();
    w[i] = stream.next_normal();
    covars(i, 0) = stream.next_normal();
    covars(i, 1) = 2.0 * covars(i, 0);  // collinear
  }
  CHECK_THROWS_AS(rrrx_additive(marginal_ranks(y), marginal_ranks(w, Variable::w), covars),
                  DegenerateData);
}

TEST_CASE("estimators are invariant under increasing transforms of the raw data") {
  const Dataset data = fixtures::table3_dataset();
  auto estimates = [](const Vector& y, const Vector& w) {
    const RankVector u = marginal_ranks(y);
    const RankVector v = marginal_ranks(w, Variable::w);
    return std::array<double, 3>{pearson_slope_corr(u, v).value, fully_restricted(u, v).value,
                                 regression_slopes(u, v).restricted.value};
  };
  const auto base = estimates(data.y, data.w);
  const Vector y_exp = (data.y.array() / 50.0).exp().matrix();
  const Vector w_cube = data.w.array().cube().matrix();
  const auto transformed = estimates(y_exp, w_cube);
  for (int k = 0; k < 3; ++k) CHECK(std::fabs(base[k] - transformed[k]) < 1e-10);
}

TEST_CASE("restricted and plain correlation agree to O(1/n) on oracle ranks") {
  const Index n = 10000;
  const DgpSpec spec{DgpKind::bivariate_mc, 0.0, 0.5, n, 31415};
  const Dataset data = gen_data(spec);
  const OracleRanks oracle = oracle_ranks(spec, data);
  const double corr = pearson_slope_corr(oracle.u, oracle.v).value;
  const double restricted = restricted_corr(oracle.u, oracle.v).value;
  CHECK(std::fabs(corr - restricted) < 0.005);
  const auto reg = regression_slopes(oracle.u, oracle.v);
  CHECK(std::fabs((reg.restricted.value + reg.reverse_restricted.value) / 2.0 - restricted) <
        0.005);
}
