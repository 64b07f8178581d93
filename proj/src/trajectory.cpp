#include "monfermi/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace monfermi {

GaussianTrajectory::GaussianTrajectory(const SimParams& params, const FourierWorkspace& ws,
                                       Rng& rng)
    : params_(params), ws_(ws), rng_(rng) {
  params_.validate();
  if (ws.size() != params.L) throw InvalidParameter("workspace size mismatch");
  site_phase_.resize(params.L);
  upd_.resize(params.L);
  occ_.resize(params.L);
}

void GaussianTrajectory::set_state(const GaussianState& s) {
  if (s.size() != params_.L) throw InvalidParameter("state size mismatch");
  dm_ = ws_.to_momentum(s.d);
  time_ = s.time;
  occ_valid_ = false;
}

GaussianState GaussianTrajectory::real_state() const {
  GaussianState s;
  s.d = ws_.to_real(dm_);
  s.time = time_;
  return s;
}

const Eigen::VectorXd& GaussianTrajectory::occupations() {
  if (!occ_valid_) refresh_occupations();
  return occ_;
}

void GaussianTrajectory::refresh_occupations() {
  ws_.occupations_from_momentum(dm_, occ_);
  occ_valid_ = true;
}

double GaussianTrajectory::total_rate() const {
  if (params_.model == ModelKind::FermionCounting)
    return params_.gamma * params_.L;
  const double n_part = dm_.trace().real();
  return n_part > 1e-12 ? 2.0 * params_.gamma * n_part : 0.0;
}

double GaussianTrajectory::sample_waiting_time() {
  const double rate = total_rate();
  const double u = rng_.uniform();
  if (rate <= 0) return std::numeric_limits<double>::infinity();
  return -std::log1p(-u) / rate;
}

void GaussianTrajectory::evolve(double tau) {
  ws_.evolve_momentum(dm_, tau);
  time_ += tau;
  occ_valid_ = false;
}

Eigen::VectorXd GaussianTrajectory::probability_vector() {
  const int L = params_.L;
  const Eigen::VectorXd& n = occupations();
  Eigen::VectorXd p;
  if (params_.model == ModelKind::FermionCounting) {
    p.resize(2 * L);
    for (int l = 0; l < L; ++l) {
      p(l) = n(l) / L;
      p(L + l) = (1.0 - n(l)) / L;
    }
  } else {
    const double n_tot = dm_.trace().real();
    p = n / n_tot;
  }
  for (int i = 0; i < p.size(); ++i)
    if (p(i) < 1e-12) p(i) = 0.0;
  return p;
}

int GaussianTrajectory::select_outcome(const Eigen::VectorXd& p, double u) {
  const double total = p.sum();
  if (total <= 0) throw InternalInconsistency("all jump probabilities vanish");
  const double target = u * total;
  double cum = 0.0;
  for (int i = 0; i < p.size(); ++i) {
    cum += p(i);
    if (target < cum) return i;
  }
  for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i)
    if (p(i) > 0) return i;
  throw InternalInconsistency("outcome selection failed");
}

JumpEvent GaussianTrajectory::sample_and_apply_jump() {
  const Eigen::VectorXd p = probability_vector();
  const double u = rng_.uniform();
  return apply_outcome(select_outcome(p, u));
}

JumpEvent GaussianTrajectory::apply_outcome(int outcome_index) {
  const int L = params_.L;
  JumpEvent ev;
  ev.time = time_;
  if (params_.model == ModelKind::FermionCounting) {
    ev.kind = outcome_index < L ? JumpEvent::Kind::Loss : JumpEvent::Kind::Gain;
    ev.site = outcome_index % L;
  } else {
    ev.kind = JumpEvent::Kind::Occupation;
    ev.site = outcome_index;
  }
  const int m = ev.site;

  // e_m in the momentum basis: phi_k = exp(-2 pi i k m / L) / sqrt(L).
  const double w = -2.0 * M_PI * m / L;
  const double norm = 1.0 / std::sqrt(static_cast<double>(L));
  for (int k = 0; k < L; ++k) site_phase_(k) = std::polar(norm, w * k);

  upd_.noalias() = dm_ * site_phase_;
  const double dmm = site_phase_.dot(upd_).real();

  switch (ev.kind) {
    case JumpEvent::Kind::Loss:
      if (dmm <= kEpsJump) throw DegenerateJump("loss on (nearly) empty site");
      dm_.noalias() -= (upd_ / dmm) * upd_.adjoint();
      break;
    case JumpEvent::Kind::Gain: {
      const double hole = 1.0 - dmm;
      if (hole <= kEpsJump) throw DegenerateJump("gain on (nearly) occupied site");
      upd_ = site_phase_ - upd_;
      dm_.noalias() += (upd_ / hole) * upd_.adjoint();
      break;
    }
    case JumpEvent::Kind::Occupation:
      if (dmm <= kEpsJump) throw DegenerateJump("occupation jump on (nearly) empty site");
      dm_.noalias() -= (upd_ / dmm) * upd_.adjoint();
      dm_.noalias() += site_phase_ * site_phase_.adjoint();
      break;
  }
  occ_valid_ = false;
  ++n_jumps_;
  if (polish_every_ > 0 && n_jumps_ % polish_every_ == 0) {
    Matrix d2 = dm_ * dm_;
    dm_ = 3.0 * d2 - 2.0 * (d2 * dm_);
  }
  return ev;
}

GaussianState make_initial_state(const SimParams& params, Rng& rng) {
  if (params.init == InitialState::Neel) return init_neel(params.L);
  return init_random_classical(params.L, params.L / 2, rng);
}

SampleGrid grid_from_params(const SimParams& params) {
  SampleGrid g;
  g.t_start = params.t_burn;
  g.dt = params.dt_sample;
  g.n = static_cast<int>(std::floor(params.t_sample / params.dt_sample + 1e-9)) + 1;
  return g;
}

SampledTrajectory run_trajectory(const SimParams& params, const SampleGrid& grid,
                                 const FourierWorkspace& ws, std::uint64_t traj_index,
                                 const RunOptions& opts) {
  params.validate();
  Rng rng(params.seed ^ traj_index);
  GaussianTrajectory traj(params, ws, rng);
  traj.set_state(make_initial_state(params, rng));
  traj.set_polish_interval(opts.polish_every);

  const int L = params.L;
  SampledTrajectory out;
  out.times.resize(grid.n);
  out.z.resize(grid.n, L);
  out.jump_counts.resize(grid.n, L);

  Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> counts =
      Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1>::Zero(L);
  const double n0 = traj.trace();
  std::int64_t gains = 0, losses = 0;

  int next_sample = 0;
  long cycles = 0;
  while (next_sample < grid.n) {
    const double tau = traj.sample_waiting_time();
    const double t_jump = traj.time() + tau;

    while (next_sample < grid.n && grid.t(next_sample) <= t_jump) {
      traj.evolve(std::max(0.0, grid.t(next_sample) - traj.time()));
      out.times[next_sample] = grid.t(next_sample);
      const Eigen::VectorXd& occ = traj.occupations();
      for (int l = 0; l < L; ++l) out.z(next_sample, l) = 2.0 * occ(l) - 1.0;
      out.jump_counts.row(next_sample) = counts.transpose();
      if (opts.on_snapshot) opts.on_snapshot(next_sample, traj.time(), traj.real_state());
      ++next_sample;
    }
    // With an infinite waiting time (OM, empty lattice) the segment above
    // fills every remaining sample and the loop terminates here.
    if (next_sample >= grid.n) break;

    traj.evolve(std::max(0.0, t_jump - traj.time()));
    JumpEvent ev;
    try {
      ev = traj.sample_and_apply_jump();
    } catch (const DegenerateJump& e) {
      throw DegenerateJump(std::string(e.what()) + " [trajectory " +
                           std::to_string(traj_index) + ", t=" + std::to_string(t_jump) + "]");
    }
    counts(ev.site) += 1;
    if (ev.kind == JumpEvent::Kind::Gain) ++gains;
    if (ev.kind == JumpEvent::Kind::Loss) ++losses;
    if (opts.record_events) out.events.push_back(ev);

    ++cycles;
    if (opts.invariant_check_every > 0 && cycles % opts.invariant_check_every == 0) {
      const double tr = traj.trace();
      const double expected =
          params.model == ModelKind::OccupationMeasurement
              ? n0
              : n0 + static_cast<double>(gains) - static_cast<double>(losses);
      if (std::abs(tr - expected) > 1e-8)
        throw InternalInconsistency("trajectory trace bookkeeping drifted");
      if (traj.purity_defect() > 1e-8)
        throw InternalInconsistency("trajectory purity invariant violated");
    }
  }
  return out;
}

}  // namespace monfermi
