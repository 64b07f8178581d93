#pragma once

#include <Eigen/Dense>
#include <vector>

#include "monfermi/params.hpp"
#include "monfermi/rng.hpp"
#include "monfermi/trajectory.hpp"

namespace monfermi::temporal {

// Site-resolved z_l(t) series on a uniform time grid; produced by quantum
// trajectories and by the classical exclusion process alike.
struct ZSeries {
  double dt = 0.0;
  Eigen::MatrixXd z;  // n_samples x L
};

struct LagCurve {
  std::vector<double> lag;
  std::vector<double> mean;
  std::vector<double> stderr_;
  long n_traj = 0;
};

// Connected density autocorrelation K(tau) = mean[z_l(t+tau) z_l(t)] - zbar^2,
// averaged over sites, time origins, and trajectories. The subtraction uses
// the empirical mean of z over the ensemble window; errors are computed
// across per-trajectory estimates. Lags run to max_lag_fraction of the
// window (long lags have too few origin pairs).
class AutocorrelationEstimator {
 public:
  AutocorrelationEstimator(int n_samples, double dt, double max_lag_fraction = 0.25);
  void add_trajectory(const ZSeries& traj);
  // Telegraph-reduced variant: the per-site jump-parity string factors out
  // the classical telegraph process; no mean subtraction (the string carries
  // the normalization, Q(0) = K(0)).
  void add_trajectory_telegraph(const SampledTrajectory& traj);
  LagCurve k_curve() const;
  LagCurve q_curve() const;
  int n_lags() const { return n_lags_; }

 private:
  void accumulate(const Eigen::MatrixXd& z,
                  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>* counts);

  int n_samples_;
  int n_lags_;
  double dt_;
  std::vector<Eigen::VectorXd> raw_;   // per-trajectory <z z> by lag
  std::vector<double> zbar_;           // per-trajectory mean z
  bool telegraph_ = false;
};

// Per-trajectory raw lag moments mean_{t,l}[z_l(t+tau) z_l(t)], without mean
// subtraction; the building block of both K and Q estimators.
Eigen::VectorXd raw_autocorrelation(const Eigen::MatrixXd& z, int n_lags);
Eigen::VectorXd raw_telegraph(
    const Eigen::MatrixXd& z,
    const Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>& counts, int n_lags);

// Closed-form unconditional two-time correlators.
//
// Fermion counting (exact): C_{0,l}(t) = (1/4) e^{-|t|/tau0} J_l(2J|t|)^2,
// tau0 = n/gamma at n = 1/2. Bessel J of integer order evaluated by
// Boost.Math (accurate to ~1e-14 for the orders and arguments in scope).
double unconditional_c0_fc(int l, double t, double J, double gamma);

// Occupation measurements (asymptotic, l >> l0 or t >> tau0):
// n(1-n) exp(-l^2/(4 nu |t|)) / sqrt(4 pi nu |t|), nu = 2 n J^2 / gamma.
double unconditional_c0_om(double l, double t, double n, double J, double gamma);

// Symmetric simple exclusion process, continuous-time Gillespie dynamics:
// total attempt rate N * rate; pick a particle uniformly, direction +-1 with
// probability 1/2, move if the target is empty; blocked attempts still
// advance time. Records z = +-1 occupations on the sample grid.
ZSeries ssep_simulate(int L, int N, double rate, const SampleGrid& grid, Rng& rng,
                      bool random_initial = true);

struct PowerLawFit {
  double exponent = 0.0;
  double exponent_err = 0.0;
  double amplitude = 0.0;
};

// Least-squares slope of ln K vs ln tau on [tau_lo, tau_hi]; returns the
// decay exponent alpha (K ~ tau^-alpha).
PowerLawFit ssep_autocorrelation_fit(const LagCurve& k, double tau_lo, double tau_hi);

}  // namespace monfermi::temporal
