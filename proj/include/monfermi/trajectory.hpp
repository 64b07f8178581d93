#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <vector>

#include "monfermi/gaussian_state.hpp"
#include "monfermi/params.hpp"
#include "monfermi/propagator.hpp"
#include "monfermi/rng.hpp"

namespace monfermi {

struct JumpEvent {
  double time;
  int site;
  enum class Kind { Loss, Gain, Occupation } kind;
};

struct SampleGrid {
  double t_start = 0.0;
  double dt = 1.0;
  int n = 0;
  double t_end() const { return n > 0 ? t_start + (n - 1) * dt : t_start; }
  double t(int i) const { return t_start + i * dt; }
};

// Per-trajectory record on a uniform sample grid: z_l = 2<n_l> - 1 and the
// cumulative per-site jump count N_l(t) (all kinds summed).
struct SampledTrajectory {
  std::vector<double> times;
  Eigen::MatrixXd z;                                      // n_samples x L
  Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic> jump_counts;
  std::vector<JumpEvent> events;                          // only if requested
};

// Stochastic evolution of one Gaussian trajectory.
//
// No-jump segments are purely unitary: for both models sum_a L†_a L_a is
// proportional to the identity on the relevant sector (gamma L / 2 for
// fermion counting since n_l + (1 - n_l) = 1; gamma N for occupation
// measurements on the fixed-N sector), so the non-Hermitian part of the
// deterministic evolution only rescales the norm, which drops out upon
// normalization. Waiting times are therefore exact exponentials with total
// rate gamma L (FC) resp. 2 gamma N (OM), and the engine never tracks a
// decaying norm.
//
// Random-number contract (shared with the Fock oracle for lockstep checks):
// each jump cycle draws exactly two uniforms, in this order:
//   1. the waiting time  tau = -log(1 - u1) / R_tot,
//   2. the outcome, selected by a cumulative scan of the probability vector
//      ordered as [loss site 0..L-1, gain site 0..L-1] (FC) or
//      [site 0..L-1] (OM).
// Sampling observables consumes no randomness.
//
// Internally the density matrix is held in the momentum basis, where a
// unitary segment is an elementwise phase twist and a jump is a rank-1
// update, both O(L^2); occupations are recovered per jump with one
// wrapped-diagonal pass plus a length-L FFT.
class GaussianTrajectory {
 public:
  GaussianTrajectory(const SimParams& params, const FourierWorkspace& ws, Rng& rng);

  void set_state(const GaussianState& s);
  GaussianState real_state() const;

  double time() const { return time_; }
  double trace() const { return dm_.trace().real(); }
  const Eigen::VectorXd& occupations();

  // Rate of the exponential waiting-time distribution; 0 means "no jump
  // ever" (OM with an empty lattice).
  double total_rate() const;

  // Draws u1; +infinity when total_rate() == 0.
  double sample_waiting_time();

  void evolve(double tau);

  // Draws u2, selects (kind, site), applies the rank-1 update, and returns
  // the event. Negative probabilities from roundoff (|p| < 1e-12) are
  // clamped to zero before normalization.
  JumpEvent sample_and_apply_jump();

  // Born probability vector in scan order; exposed for lockstep tests.
  Eigen::VectorXd probability_vector();
  JumpEvent apply_outcome(int outcome_index);

  // The cumulative scan both engines share: smallest i with
  // sum_{k<=i} p_k > u * sum p. Throws when all probabilities vanish.
  static int select_outcome(const Eigen::VectorXd& p, double u);

  long jumps_applied() const { return n_jumps_; }

  // max|D^2 - D|, evaluated in the momentum basis (basis-invariant).
  double purity_defect() const { return (dm_ * dm_ - dm_).cwiseAbs().maxCoeff(); }

  // McWeeny purification 3 D^2 - 2 D^3 every k jumps (0 disables); controls
  // projector roundoff drift on very long runs.
  void set_polish_interval(long k) { polish_every_ = k; }

 private:
  void refresh_occupations();

  const SimParams params_;
  const FourierWorkspace& ws_;
  Rng& rng_;
  Matrix dm_;  // momentum-basis density matrix
  double time_ = 0.0;
  Eigen::VectorXd occ_;
  bool occ_valid_ = false;
  long n_jumps_ = 0;
  long polish_every_ = 0;
  Vector site_phase_;  // scratch: momentum representation of e_m
  Vector upd_;         // scratch: update vector
};

struct RunOptions {
  bool record_events = false;
  long invariant_check_every = 100;  // 0 disables purity/trace checks
  long polish_every = 0;
  std::function<void(int, double, const GaussianState&)> on_snapshot;
};

GaussianState make_initial_state(const SimParams& params, Rng& rng);

// Full quantum-jump trajectory: alternating exponential waiting times,
// unitary segments (split exactly at sample-grid times), and jump updates.
// Deterministic given (params.seed ^ traj_index, params).
SampledTrajectory run_trajectory(const SimParams& params, const SampleGrid& grid,
                                 const FourierWorkspace& ws, std::uint64_t traj_index = 0,
                                 const RunOptions& opts = {});

SampleGrid grid_from_params(const SimParams& params);

}  // namespace monfermi
