#include <doctest.h>

#include <cmath>

#include "monfermi/temporal.hpp"

using namespace monfermi;
using namespace monfermi::temporal;

TEST_SUITE_BEGIN("temporal");

TEST_CASE("K(0) = 1 for an ensemble of classical configurations") {
  AutocorrelationEstimator est(10, 0.5);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    ZSeries s;
    s.dt = 0.5;
    s.z.resize(10, 16);
    for (int i = 0; i < 10; ++i)
      for (int l = 0; l < 16; ++l) s.z(i, l) = rng.uniform() < 0.5 ? -1.0 : 1.0;
    est.add_trajectory(s);
  }
  const auto k = est.k_curve();
  CHECK(k.mean[0] == doctest::Approx(1.0).epsilon(0.01));
  CHECK(k.lag[0] == 0.0);
  CHECK(k.n_traj == 50);
  // |K(tau)| <= K(0)
  for (std::size_t i = 1; i < k.mean.size(); ++i) CHECK(std::abs(k.mean[i]) <= k.mean[0] + 1e-12);
}

TEST_CASE("Q(0) = K(0) and model guards") {
  SampledTrajectory t;
  t.z.resize(8, 4);
  t.jump_counts.resize(8, 4);
  Rng rng(9);
  for (int i = 0; i < 8; ++i)
    for (int l = 0; l < 4; ++l) {
      t.z(i, l) = rng.uniform() < 0.5 ? -1.0 : 1.0;
      t.jump_counts(i, l) = i;  // one jump per step per site
    }
  AutocorrelationEstimator kq(8, 1.0);
  kq.add_trajectory_telegraph(t);
  const auto q = kq.q_curve();
  const Eigen::VectorXd raw = raw_autocorrelation(t.z, 3);
  CHECK(q.mean[0] == doctest::Approx(raw(0)));  // empty sign string at lag 0
  CHECK_THROWS_AS(kq.k_curve(), InvalidParameter);
}

TEST_CASE("unconditional FC correlator: equal-time values and Bessel sum rule") {
  const double J = 1.0, gamma = 0.8;
  CHECK(unconditional_c0_fc(0, 0.0, J, gamma) == doctest::Approx(0.25));
  CHECK(unconditional_c0_fc(3, 0.0, J, gamma) == doctest::Approx(0.0).scale(1.0));
  for (const double t : {0.1, 1.0, 10.0}) {
    double sum = 0.0;
    for (int l = -200; l <= 200; ++l) sum += unconditional_c0_fc(l, t, J, gamma);
    CHECK(sum == doctest::Approx(0.25 * std::exp(-2.0 * gamma * t)).epsilon(1e-10));
  }
}

TEST_CASE("unconditional OM correlator: diffusive form") {
  const double n = 0.5, J = 1.0, gamma = 2.0;
  const double nu = 2.0 * n * J * J / gamma;
  // l = 0 prefactor 1/(8 sqrt(pi nu t)) at n = 1/2
  for (const double t : {0.5, 2.0, 20.0}) {
    CHECK(unconditional_c0_om(0.0, t, n, J, gamma) ==
          doctest::Approx(1.0 / (8.0 * std::sqrt(M_PI * nu * t))).epsilon(1e-12));
  }
  // symmetry in l and t
  CHECK(unconditional_c0_om(3.0, 1.5, n, J, gamma) ==
        doctest::Approx(unconditional_c0_om(-3.0, -1.5, n, J, gamma)));
  // gaussian normalization: integral over l gives n(1-n)
  const double t = 4.0;
  double integral = 0.0;
  for (double l = -200.0; l <= 200.0; l += 0.05)
    integral += 0.05 * unconditional_c0_om(l, t, n, J, gamma);
  CHECK(integral == doctest::Approx(0.25).epsilon(1e-6));
  CHECK_THROWS_AS(unconditional_c0_om(1.0, 0.0, n, J, gamma), InvalidParameter);
}

TEST_CASE("SSEP: full lattice is frozen") {
  Rng rng(5);
  SampleGrid grid{0.0, 0.5, 20};
  const auto s = ssep_simulate(12, 12, 1.0, grid, rng);
  for (int i = 1; i < s.z.rows(); ++i)
    CHECK((s.z.row(i) - s.z.row(0)).cwiseAbs().maxCoeff() == 0.0);
  for (int l = 0; l < 12; ++l) CHECK(s.z(0, l) == 1.0);
}

TEST_CASE("SSEP: single particle diffuses with D = rate/2") {
  // mean-square displacement = rate * t (one +-1 hop attempt per event)
  const int L = 2001;  // effectively infinite for the times probed
  const double rate = 1.0;
  Rng rng(11);
  const int n_real = 4000;
  SampleGrid grid{0.0, 5.0, 5};
  double msd[5] = {0, 0, 0, 0, 0};
  for (int r = 0; r < n_real; ++r) {
    const auto s = ssep_simulate(L, 1, rate, grid, rng, false);
    // particle starts at site 0 (deterministic initial); track it via z
    int pos0 = -1;
    for (int l = 0; l < L; ++l)
      if (s.z(0, l) > 0) pos0 = l;
    for (int i = 0; i < 5; ++i) {
      int pos = -1;
      for (int l = 0; l < L; ++l)
        if (s.z(i, l) > 0) pos = l;
      int d = std::abs(pos - pos0);
      d = std::min(d, L - d);
      msd[i] += static_cast<double>(d) * d;
    }
  }
  for (int i = 1; i < 5; ++i) {
    const double t = grid.t(i);
    const double expect = rate * t;
    // var of per-sample squared displacement ~ 2 expect^2 for gaussian spread
    const double band = 3.0 * std::sqrt(2.0) * expect / std::sqrt(n_real);
    CHECK(std::abs(msd[i] / n_real - expect) < band + 0.05);
  }
}

TEST_CASE("SSEP: stationary occupancy is uniform (detailed balance)") {
  const int L = 24, N = 12;
  Rng rng(17);
  SampleGrid grid{50.0, 2.0, 40};
  Eigen::VectorXd occ = Eigen::VectorXd::Zero(L);
  const int n_real = 60;
  for (int r = 0; r < n_real; ++r) {
    const auto s = ssep_simulate(L, N, 1.0, grid, rng, false);  // Neel-like start
    for (int i = 0; i < s.z.rows(); ++i)
      for (int l = 0; l < L; ++l) occ(l) += (s.z(i, l) + 1.0) / 2.0;
  }
  occ /= static_cast<double>(n_real * grid.n);
  for (int l = 0; l < L; ++l) {
    // single-site occupancy -> N/L within a generous band (samples correlated)
    CHECK(std::abs(occ(l) - 0.5) < 3.0 / std::sqrt(static_cast<double>(n_real * grid.n) / 8.0));
  }
}

TEST_CASE("power-law fit of a synthetic K recovers the exponent") {
  LagCurve k;
  for (int i = 1; i <= 40; ++i) {
    const double tau = 0.25 * i;
    k.lag.push_back(tau);
    k.mean.push_back(std::pow(tau, -0.5));
    k.stderr_.push_back(0.0);
  }
  const auto fit = ssep_autocorrelation_fit(k, 0.5, 10.0);
  CHECK(fit.exponent == doctest::Approx(0.5).epsilon(1e-10));
  // window shifted by one grid point moves alpha by < 0.02
  const auto fit2 = ssep_autocorrelation_fit(k, 0.75, 10.25);
  CHECK(std::abs(fit2.exponent - fit.exponent) < 0.02);
}

TEST_SUITE_END();
