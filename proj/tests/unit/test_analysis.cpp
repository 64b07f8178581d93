#include <doctest.h>

#include <cmath>

#include "monfermi/analysis.hpp"
#include "monfermi/rng.hpp"

using namespace monfermi;
using namespace monfermi::analysis;

TEST_SUITE_BEGIN("analysis");

namespace {
Curve synthetic_crossover(double amp, double lambda, double x_lo = 1.0, double x_hi = 400.0,
                          int n = 160) {
  // C = amp / x^2 * exp(-x/lambda) on a log grid
  Curve c;
  for (int i = 0; i < n; ++i) {
    const double x = x_lo * std::pow(x_hi / x_lo, i / (n - 1.0));
    c.x.push_back(x);
    c.y.push_back(amp / (x * x) * std::exp(-x / lambda));
    c.yerr.push_back(0.0);
  }
  return c;
}
}  // namespace

TEST_CASE("power law fit: exact and noisy synthetic data") {
  Curve c;
  for (int i = 1; i <= 50; ++i) {
    c.x.push_back(i);
    c.y.push_back(3.0 * std::pow(i, -2.0));
  }
  const auto fit = power_law_fit(c, 0.0, 1e9);
  CHECK(fit.exponent == doctest::Approx(-2.0).epsilon(1e-12));
  CHECK(fit.amplitude == doctest::Approx(3.0).epsilon(1e-10));

  // 1% multiplicative noise: fitted exponent within its own error of -2
  Rng rng(77);
  Curve noisy;
  for (int i = 1; i <= 200; ++i) {
    const double u1 = std::max(rng.uniform(), 1e-12);
    const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * rng.uniform());
    noisy.x.push_back(i);
    noisy.y.push_back(std::pow(i, -2.0) * (1.0 + 0.01 * g));
    noisy.yerr.push_back(0.01 * std::pow(i, -2.0));
  }
  const auto nf = power_law_fit(noisy, 0.0, 1e9);
  CHECK(std::abs(nf.exponent + 2.0) < 3.0 * nf.exponent_err);

  // global rescaling leaves the exponent invariant, scales the amplitude
  Curve scaled = c;
  for (auto& y : scaled.y) y *= 7.5;
  const auto sf = power_law_fit(scaled, 0.0, 1e9);
  CHECK(sf.exponent == doctest::Approx(fit.exponent).epsilon(1e-12));
  CHECK(sf.amplitude == doctest::Approx(7.5 * fit.amplitude).epsilon(1e-10));

  CHECK_THROWS_AS(power_law_fit(c, 100.0, 101.0), InvalidParameter);  // < 3 points
}

TEST_CASE("crossover: pure power law yields the beyond-window sentinel") {
  const auto res = crossover_scale(synthetic_crossover(2.0, 1e12), 2.0);
  CHECK_FALSE(res.found);
}

TEST_CASE("crossover: exponential cutoff detected near the analytic point") {
  // deviation from the tangent at x0: 1 - exp(-(x-x0)/Lambda) > 0.1
  // => x_c = x0 + Lambda ln(10/9)
  for (const double lambda : {30.0, 60.0, 120.0}) {
    const double window_lo = 2.0;
    const auto res = crossover_scale(synthetic_crossover(5.0, lambda), window_lo);
    REQUIRE(res.found);
    const double x0 = res.tangent_x;
    const double expect = x0 + lambda * std::log(10.0 / 9.0);
    CHECK(res.scale == doctest::Approx(expect).epsilon(0.20));
  }
  // detected scale grows with the cutoff
  const auto r1 = crossover_scale(synthetic_crossover(5.0, 30.0), 2.0);
  const auto r2 = crossover_scale(synthetic_crossover(5.0, 120.0), 2.0);
  CHECK(r2.scale > r1.scale);
}

TEST_CASE("crossover is stable under truncation above the detected scale") {
  const auto full = crossover_scale(synthetic_crossover(5.0, 50.0), 2.0);
  REQUIRE(full.found);
  Curve c = synthetic_crossover(5.0, 50.0);
  Curve trunc;
  for (std::size_t i = 0; i < c.x.size(); ++i) {
    if (c.x[i] > full.scale * 1.35) break;  // keep the persistence points
    trunc.x.push_back(c.x[i]);
    trunc.y.push_back(c.y[i]);
    trunc.yerr.push_back(0.0);
  }
  const auto cut = crossover_scale(trunc, 2.0);
  REQUIRE(cut.found);
  CHECK(cut.scale == doctest::Approx(full.scale).epsilon(1e-12));
}

TEST_CASE("locate_maximum: quadratic-in-log profile to 0.1%") {
  Curve c;
  for (int i = 0; i < 60; ++i) {
    const double x = std::pow(10.0, -1.0 + 3.0 * i / 59.0);
    c.x.push_back(x);
    const double u = std::log(x) - std::log(5.0);
    c.y.push_back(1.0 - u * u);
    c.yerr.push_back(0.01);
  }
  const auto res = locate_maximum(c);
  REQUIRE(res.interior);
  CHECK(res.x_max == doctest::Approx(5.0).epsilon(1e-3));
  CHECK(res.y_max == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(res.x_err > 0.0);

  // boundary maximum flagged
  Curve rising;
  for (int i = 1; i <= 10; ++i) {
    rising.x.push_back(i);
    rising.y.push_back(i);
  }
  CHECK_FALSE(locate_maximum(rising).interior);
}

TEST_CASE("bootstrap errors shrink as 1/sqrt(n) on synthetic ensembles") {
  // halving the per-point error should halve the bootstrap spread
  Curve c;
  for (int i = 0; i < 40; ++i) {
    const double x = std::pow(10.0, 3.0 * i / 39.0);
    const double u = std::log(x) - std::log(30.0);
    c.x.push_back(x);
    c.y.push_back(2.0 - 0.3 * u * u);
    c.yerr.push_back(0.05);
  }
  const auto r1 = locate_maximum(c, 400);
  for (auto& e : c.yerr) e = 0.025;
  const auto r2 = locate_maximum(c, 400);
  CHECK(r2.x_err < r1.x_err * 0.75);
}

TEST_SUITE_END();
