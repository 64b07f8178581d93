#include <doctest.h>

#include "monfermi/params.hpp"
#include "monfermi/rng.hpp"

using namespace monfermi;

TEST_SUITE_BEGIN("rng");

TEST_CASE("uniforms live in [0,1) and reproduce per stream") {
  Rng a(42), b(42), c(43);
  bool same = true, diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.uniform();
    const double ub = b.uniform();
    const double uc = c.uniform();
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
    same &= (ua == ub);
    diff |= (ua != uc);
  }
  CHECK(same);
  CHECK(diff);
}

TEST_CASE("exponential mean matches 1/rate") {
  Rng rng(7);
  const double rate = 100.0;
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += rng.exponential(rate);
  const double mean = sum / n;
  // sigma of the mean = 1/(rate sqrt(n))
  CHECK(std::abs(mean - 1.0 / rate) < 3.0 / (rate * std::sqrt(n)));
}

TEST_CASE("param validation rejects bad input") {
  SimParams p;
  p.L = 3;
  p.gamma = 1.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p.L = 4;
  p.gamma = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p.gamma = 1.0;
  p.dt_sample = 0.0;
  CHECK_THROWS_AS(p.validate(), InvalidParameter);
  p.dt_sample = 0.5;
  CHECK_NOTHROW(p.validate());
}

TEST_SUITE_END();
