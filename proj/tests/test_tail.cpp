#include <doctest.h>

#include <cmath>

#include "crrr/dr.hpp"
#include "crrr/rng.hpp"

using namespace crrr;

namespace {

// Intercept-only logistic data: F(y) = L(y), so the true tail scale is 1.
Dataset logistic_sample(Index n, std::uint64_t seed) {
  rng::Stream stream(seed, 0);
  Dataset data;
  data.y.resize(n);
  data.w.resize(n);
  data.x = Matrix::Ones(n, 1);
  data.covariate_names = {"(intercept)"};
  for (Index i = 0; i < n; ++i) {
    const double u = stream.next_uniform();
    data.y[i] = std::log(u / (1.0 - u));
    data.w[i] = data.y[i];
  }
  return data;
}

}  // namespace

TEST_CASE("too little tail data raises TailDataError") {
  const Dataset data = logistic_sample(200, 4);
  const ThresholdGrid grid = build_grid(data.y, 20, 0.05, 0.95);
  const DrFit fit = fit_dr(data, Variable::y, grid, LinkFunction::logistic(), Vector::Ones(200));
  // about 10 observations sit above the 0.95 quantile; 2*30 are required
  CHECK_THROWS_AS(fit_tail(fit, data, TailSide::upper, 30, Vector::Ones(200)), TailDataError);
}

TEST_CASE("tail scale recovers 1 on logistic data within 3 SEs at n=5000") {
  const Index n = 5000;
  const Dataset data = logistic_sample(n, 99);
  const ThresholdGrid grid = build_grid(data.y, 100, 0.05, 0.95);
  const DrFit fit = fit_dr(data, Variable::y, grid, LinkFunction::logistic(), Vector::Ones(n));

  for (TailSide side : {TailSide::lower, TailSide::upper}) {
    const TailFit tail = fit_tail(fit, data, side, 30, Vector::Ones(n));
    CHECK(tail.scale > 0.0);
    // one-parameter MLE oracle: SE from the scalar observed information
    const double anchor = tail.anchor;
    const double span = tail.pivot - anchor;
    double info = 0.0;
    const double offset = fit.coefs(0, side == TailSide::upper ? grid.size() - 1 : 0);
    for (Index i = 0; i < n; ++i) {
      const double p = logistic_cdf(span * tail.scale + offset);
      info += span * span * p * (1.0 - p);
    }
    const double se = 1.0 / std::sqrt(info);
    CHECK(std::fabs(tail.scale - 1.0) < 3.0 * se);
    if (side == TailSide::upper) {
      CHECK(tail.pivot > tail.anchor);
    } else {
      CHECK(tail.pivot < tail.anchor);
    }
  }
}

TEST_CASE("pivot leaves the required mass between anchor and pivot and beyond") {
  const Index n = 600;
  const Dataset data = logistic_sample(n, 123);
  const ThresholdGrid grid = build_grid(data.y, 40, 0.1, 0.9);
  const DrFit fit = fit_dr(data, Variable::y, grid, LinkFunction::logistic(), Vector::Ones(n));
  const int m = 30;
  const TailFit tail = fit_tail(fit, data, TailSide::upper, m, Vector::Ones(n));
  int between = 0, at_or_beyond = 0;
  for (Index i = 0; i < n; ++i) {
    if (data.y[i] > tail.anchor && data.y[i] < tail.pivot) ++between;
    if (data.y[i] >= tail.pivot) ++at_or_beyond;
  }
  CHECK(between >= m);
  CHECK(at_or_beyond >= m);
}

TEST_CASE("tail-extended predictions reach the link limits") {
  const Index n = 3000;
  const Dataset data = logistic_sample(n, 7);
  const ThresholdGrid grid = build_grid(data.y, 60, 0.05, 0.95);
  DrFit fit = fit_dr(data, Variable::y, grid, LinkFunction::logistic(), Vector::Ones(n));
  fit.lower_tail = fit_tail(fit, data, TailSide::lower, 30, Vector::Ones(n));
  fit.upper_tail = fit_tail(fit, data, TailSide::upper, 30, Vector::Ones(n));
  const Vector x = Vector::Ones(1);
  CHECK(predict_cdf(fit, x, 1e6) == doctest::Approx(1.0));
  CHECK(predict_cdf(fit, x, -1e6) == doctest::Approx(0.0));
  // monotone through the grid edge
  double prev = -1.0;
  for (double r = -12.0; r <= 12.0; r += 0.01) {
    const double p = predict_cdf(fit, x, r);
    CHECK(p >= prev - 1e-12);
    prev = p;
  }
}

TEST_CASE("clamped endpoints without tails") {
  const Index n = 500;
  const Dataset data = logistic_sample(n, 21);
  const ThresholdGrid grid = build_grid(data.y, 30, 0.1, 0.9);
  const DrFit fit = fit_dr(data, Variable::y, grid, LinkFunction::logistic(), Vector::Ones(n));
  const Vector x = Vector::Ones(1);
  const double at_lo = predict_cdf(fit, x, grid.lo());
  const double at_hi = predict_cdf(fit, x, grid.hi());
  CHECK(predict_cdf(fit, x, grid.lo() - 100.0) == doctest::Approx(at_lo));
  CHECK(predict_cdf(fit, x, grid.hi() + 100.0) == doctest::Approx(at_hi));
}
