#include <doctest.h>

#include <cmath>

#include "monfermi/trajectory.hpp"

using namespace monfermi;

TEST_SUITE_BEGIN("trajectory");

namespace {
SimParams base_params(ModelKind model, int L, double J, double gamma) {
  SimParams p;
  p.model = model;
  p.L = L;
  p.J = J;
  p.gamma = gamma;
  p.seed = 99;
  p.t_burn = 1.0;
  p.t_sample = 5.0;
  p.dt_sample = 0.5;
  return p;
}
}  // namespace

TEST_CASE("same seed gives bit-identical trajectories") {
  const SimParams p = base_params(ModelKind::FermionCounting, 8, 1.0, 1.0);
  FourierWorkspace ws(p.L, p.J);
  RunOptions opts;
  opts.record_events = true;
  const auto a = run_trajectory(p, grid_from_params(p), ws, 3, opts);
  const auto b = run_trajectory(p, grid_from_params(p), ws, 3, opts);
  CHECK(a.events.size() == b.events.size());
  CHECK((a.z - b.z).cwiseAbs().maxCoeff() == 0.0);
  CHECK((a.jump_counts - b.jump_counts).cwiseAbs().maxCoeff() == 0);
  const auto c = run_trajectory(p, grid_from_params(p), ws, 4, opts);
  CHECK(a.events.size() != c.events.size());  // different stream
}

TEST_CASE("J=0 occupation measurements freeze classical states") {
  SimParams p = base_params(ModelKind::OccupationMeasurement, 6, 0.0, 2.0);
  p.init = InitialState::RandomClassical;
  FourierWorkspace ws(p.L, p.J);
  const auto t = run_trajectory(p, grid_from_params(p), ws, 0);
  for (int i = 1; i < t.z.rows(); ++i)
    CHECK((t.z.row(i) - t.z.row(0)).cwiseAbs().maxCoeff() < 1e-12);
  for (int i = 0; i < t.z.rows(); ++i)
    for (int l = 0; l < p.L; ++l) CHECK(std::abs(std::abs(t.z(i, l)) - 1.0) < 1e-12);
}

TEST_CASE("J=0 fermion counting is an independent telegraph per site") {
  // Every site flips at rate gamma between 0 and 1; the stationary
  // single-site autocorrelation is e^{-2 gamma tau}.
  SimParams p = base_params(ModelKind::FermionCounting, 20, 0.0, 1.0);
  p.t_burn = 3.0;
  p.t_sample = 30.0;
  p.dt_sample = 0.25;
  FourierWorkspace ws(p.L, p.J);

  const int n_traj = 60;
  const SampleGrid grid = grid_from_params(p);
  double num[5] = {0, 0, 0, 0, 0};
  long den[5] = {0, 0, 0, 0, 0};
  for (int tr = 0; tr < n_traj; ++tr) {
    const auto t = run_trajectory(p, grid, ws, tr);
    for (int k = 0; k < 5; ++k)
      for (int i = 0; i + k < t.z.rows(); ++i) {
        for (int l = 0; l < p.L; ++l) num[k] += t.z(i + k, l) * t.z(i, l);
        den[k] += p.L;
      }
  }
  CHECK(num[0] / den[0] == doctest::Approx(1.0));  // classical states, z = +-1
  for (int k = 1; k < 5; ++k) {
    const double est = (num[k] / den[k]) / (num[0] / den[0]);
    const double expect = std::exp(-2.0 * p.gamma * k * p.dt_sample);
    // consecutive samples are correlated on the 1/(2 gamma) scale; a
    // conservative 3-sigma band counts every 2nd sample as independent
    const double band = 3.0 / std::sqrt(static_cast<double>(den[k]) / 2.0);
    CHECK(std::abs(est - expect) < band);
  }
}

TEST_CASE("momentum-space jumps match the real-space reference operations") {
  SimParams p = base_params(ModelKind::FermionCounting, 10, 1.0, 1.0);
  FourierWorkspace ws(p.L, p.J);
  Rng rng(17);
  GaussianTrajectory traj(p, ws, rng);
  GaussianState ref = init_neel(p.L);
  traj.set_state(ref);

  for (int step = 0; step < 40; ++step) {
    const double tau = traj.sample_waiting_time();
    traj.evolve(tau);
    evolve_unitary(ref, tau, ws);
    const JumpEvent ev = traj.sample_and_apply_jump();
    switch (ev.kind) {
      case JumpEvent::Kind::Loss: apply_loss(ref, ev.site); break;
      case JumpEvent::Kind::Gain: apply_gain(ref, ev.site); break;
      case JumpEvent::Kind::Occupation: apply_occupation(ref, ev.site); break;
    }
    CHECK((traj.real_state().d - ref.d).cwiseAbs().maxCoeff() < 1e-11);
  }
  CHECK(traj.purity_defect() < 1e-11);
}

TEST_CASE("waiting times: FC rate gamma L, OM rate 2 gamma N") {
  SimParams p = base_params(ModelKind::FermionCounting, 100, 1.0, 1.0);
  FourierWorkspace ws(p.L, p.J);
  Rng rng(23);
  GaussianTrajectory fc(p, ws, rng);
  fc.set_state(init_neel(p.L));
  CHECK(fc.total_rate() == doctest::Approx(100.0));
  double mean = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) mean += fc.sample_waiting_time();
  mean /= n;
  CHECK(std::abs(mean - 0.01) < 3.0 * 0.01 / std::sqrt(n));

  SimParams q = base_params(ModelKind::OccupationMeasurement, 12, 1.0, 1.0);
  FourierWorkspace ws2(q.L, q.J);
  Rng rng2(29);
  GaussianTrajectory om(q, ws2, rng2);
  om.set_state(init_neel(q.L));
  CHECK(om.total_rate() == doctest::Approx(2.0 * q.gamma * q.L / 2));

  // empty lattice: no jump ever
  GaussianState empty;
  empty.d = Matrix::Zero(q.L, q.L);
  om.set_state(empty);
  CHECK(om.total_rate() == 0.0);
  CHECK(std::isinf(om.sample_waiting_time()));
}

TEST_CASE("jump distribution on classical and uniform states") {
  // FC, diag(1,0): p(loss at 0) = p(gain at 1) = 1/2
  SimParams p = base_params(ModelKind::FermionCounting, 2, 1.0, 1.0);
  FourierWorkspace ws(p.L, p.J);
  Rng rng(31);
  GaussianTrajectory traj(p, ws, rng);
  GaussianState s;
  s.d = Matrix::Zero(2, 2);
  s.d(0, 0) = 1.0;
  traj.set_state(s);
  const Eigen::VectorXd pv = traj.probability_vector();
  CHECK(pv(0) == doctest::Approx(0.5));  // loss at 0
  CHECK(pv(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pv(2) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pv(3) == doctest::Approx(0.5));  // gain at 1

  // OM on the Neel state at L=4: each occupied site with probability 1/2
  SimParams q = base_params(ModelKind::OccupationMeasurement, 4, 1.0, 1.0);
  FourierWorkspace ws2(q.L, q.J);
  Rng rng2(37);
  GaussianTrajectory omt(q, ws2, rng2);
  omt.set_state(init_neel(4));
  const Eigen::VectorXd pom = omt.probability_vector();
  CHECK(pom(0) == doctest::Approx(0.5));
  CHECK(pom(1) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(pom(2) == doctest::Approx(0.5));
  CHECK(pom(3) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("FC on the half-filled uniform state: all 8 outcomes equiprobable (3 sigma)") {
  SimParams p = base_params(ModelKind::FermionCounting, 4, 1.0, 1.0);
  FourierWorkspace ws(p.L, p.J);
  Rng rng(41);
  GaussianTrajectory traj(p, ws, rng);
  GaussianState s;
  s.d = Matrix::Constant(4, 4, 0.0);
  for (int l = 0; l < 4; ++l) s.d(l, l) = 0.5;
  // d = 1/2 per site is not a projector, but the sampler only reads the
  // diagonal; this pins the multinomial branch alone.
  traj.set_state(s);
  const Eigen::VectorXd pv = traj.probability_vector();
  int counts[8] = {0};
  const int n = 100000;
  for (int i = 0; i < n; ++i) counts[GaussianTrajectory::select_outcome(pv, rng.uniform())]++;
  const double expect = n / 8.0;
  const double sigma = std::sqrt(n * (1.0 / 8.0) * (7.0 / 8.0));
  for (const int c : counts) CHECK(std::abs(c - expect) < 3.0 * sigma);
}

TEST_SUITE_END();
