#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <nlohmann/json_fwd.hpp>
#include <optional>
#include <string>
#include <vector>

#include "monfermi/observables.hpp"
#include "monfermi/params.hpp"
#include "monfermi/trajectory.hpp"

namespace monfermi::ens {

// Which derived quantities to accumulate while trajectories run. Entropy-type
// observables are by far the most expensive part (one Hermitian
// eigendecomposition per segment per origin per snapshot).
struct ObservableRequest {
  bool c_l = false;        // connected density correlation profile
  bool entropy = false;    // S_ell on the chord grid + second cumulant
  bool i2_i3 = false;      // mutual-information scan at x ~ 1/16
  bool cft_scan = false;   // I2 - I3 vs ell_B at fixed ell_A = ell_C
  bool k_curve = false;
  bool q_curve = false;    // fermion counting only
};

struct ExperimentConfig {
  SimParams params;
  ObservableRequest observables;
  int n_ell = 66;             // grid points for S_ell
  int entropy_origins = 2;    // position-average origins for entropies
  std::vector<int> cft_ell_fixed = {4, 8};
  double max_lag_fraction = 0.25;
  int workers = 0;            // 0: hardware concurrency
  int checkpoint_every = 0;   // trajectories between checkpoints; 0 disables
  std::string output_dir;

  void validate() const;
  std::string canonical_json() const;  // config echo + checkpoint identity
};

nlohmann::json to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const nlohmann::json& j);

// Everything one trajectory contributes to the ensemble averages.
struct TrajectoryResult {
  Eigen::VectorXd c_l;
  Eigen::VectorXd s_ell;
  Eigen::VectorXd cumulant2;
  Eigen::VectorXd i2, i3;
  std::vector<Eigen::VectorXd> cft_d23;  // one curve per fixed ell
  Eigen::VectorXd raw_k;
  Eigen::VectorXd raw_q;
  double zbar = 0.0;
};

struct CurveResult {
  std::vector<double> x;
  std::vector<double> mean;
  std::vector<double> stderr_;
  long n_traj = 0;
};

struct EnsembleResult {
  ExperimentConfig config;
  std::vector<int> ell_grid;
  std::vector<int> i2_ell;          // subsystem sizes of the I2/I3 scan
  std::vector<double> i2_x;         // realized cross ratios
  std::vector<std::vector<int>> cft_ellp;  // ell_B grids per fixed ell
  std::map<std::string, CurveResult> curves;
  long n_traj = 0;
};

// Runs params.n_traj trajectories (trajectory i seeded params.seed ^ i)
// across a worker pool, merging per-trajectory results in index order so the
// output is independent of scheduling. Checkpoints to
// output_dir/checkpoint.json every checkpoint_every trajectories and resumes
// from a matching checkpoint if one exists.
EnsembleResult run_ensemble(const ExperimentConfig& config,
                            std::function<void(int, int)> progress = {});

// Writes one CSV per accumulated curve plus manifest.json; returns the file
// names written.
std::vector<std::string> write_result_files(const EnsembleResult& result,
                                            const std::string& dir);

}  // namespace monfermi::ens
