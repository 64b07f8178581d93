#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "monfermi/gaussian_state.hpp"

namespace monfermi::obs {

// Mean and standard error over trajectory-level samples. Consecutive
// snapshots within one trajectory are correlated, so the error is always
// computed across per-trajectory means, never across raw samples.
struct EnsembleStatistic {
  double mean = 0.0;
  double stderr_ = 0.0;
  long n_samples = 0;
};

// Welford accumulator over trajectories for a vector-valued observable.
class TrajectoryAccumulator {
 public:
  explicit TrajectoryAccumulator(int dim = 0) { reset(dim); }
  void reset(int dim);
  void add(const Eigen::VectorXd& trajectory_mean);
  int dim() const { return static_cast<int>(mean_.size()); }
  long count() const { return n_; }
  EnsembleStatistic stat(int i) const;
  Eigen::VectorXd means() const { return mean_; }
  Eigen::VectorXd stderrs() const;

  // Checkpoint support
  const Eigen::VectorXd& raw_mean() const { return mean_; }
  const Eigen::VectorXd& raw_m2() const { return m2_; }
  void restore(const Eigen::VectorXd& mean, const Eigen::VectorXd& m2, long n);

 private:
  Eigen::VectorXd mean_, m2_;
  long n_ = 0;
};

// Three contiguous subsystems A, B, C starting at `origin`, with periodic
// wraparound. B separates A from C.
struct SegmentLayout {
  int ell_a = 0;
  int ell_b = 0;
  int ell_c = 0;
  int origin = 0;
  int L = 0;

  void validate() const;
  std::vector<int> sites_a() const;
  std::vector<int> sites_b() const;
  std::vector<int> sites_c() const;
  std::vector<int> sites_ab() const;
  std::vector<int> sites_bc() const;
  std::vector<int> sites_ac() const;  // non-contiguous union
  std::vector<int> sites_abc() const;
};

// Position-averaged connected density correlation of one snapshot,
//   C_l = delta_{l,0}/2 - mean_l0 |d_{l0+l, l0}|^2,   l = 0..L/2.
// The delta/2 coefficient is the half-filling specialization.
Eigen::VectorXd correlation_profile(const Matrix& d);

// Von Neumann entropy of the reduced single-particle density matrix on an
// arbitrary site set, from the eigenvalues lambda of d restricted to the set:
// S = -sum [lambda ln lambda + (1-lambda) ln(1-lambda)], eigenvalues clamped
// to [1e-12, 1 - 1e-12] against roundoff before the logarithm.
double subsystem_entropy(const Matrix& d, std::span<const int> sites);

// Exact single-snapshot Wick form of the second particle-number cumulant,
// C_A^(2) = sum_{l,l' in A} (delta_{ll'} d_ll - |d_{ll'}|^2).
double second_cumulant(const Matrix& d, std::span<const int> sites);

// Finite-size chord length (L/pi) sin(pi ell / L).
double chord_length(double ell, int L);

// Integer subsystem-size grid with ell_1 = 1, ell_N = L/2, chosen so the
// chord-length ratios ln(chord_{i+1}/chord_i) are as uniform as integer
// rounding allows; duplicates removed.
std::vector<int> build_ell_grid(int L, int n_ell);

struct CentralChargePoint {
  double ell_geo;  // geometric-mean chord abscissa sqrt(chord * chord')
  double c;
};

// Discrete effective central charge c = 3 (S' - S) / ln(chord'/chord) on
// consecutive grid points.
std::vector<CentralChargePoint> effective_central_charge(std::span<const double> entropy,
                                                         std::span<const int> ell, int L);

double mutual_information_i2(const Matrix& d, const SegmentLayout& layout);
double tripartite_i3(const Matrix& d, const SegmentLayout& layout);

// Conformal cross ratio from chord lengths of the composite intervals,
// x = chord(A) chord(C) / (chord(A u B) chord(B u C)).
double cross_ratio(const SegmentLayout& layout);

struct CftResidualSummary {
  std::vector<double> residual;           // (I2-I3) - (c/3) ln(1/(1-x))
  std::vector<double> relative_residual;  // residual / CFT value
  double max_relative_in_window = 0.0;
  int n_in_window = 0;
};

// Residuals of I2 - I3 against the CFT collapse law (c/3) ln(1/(1-x));
// probe[i] is the scale tested against the [window_lo, window_hi] range.
CftResidualSummary cft_collapse_check(std::span<const double> i2, std::span<const double> i3,
                                      std::span<const double> x, std::span<const double> probe,
                                      double c, double window_lo, double window_hi);

}  // namespace monfermi::obs
