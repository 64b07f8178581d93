#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace monfermi {

struct InvalidParameter : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A jump whose Born probability is numerically zero was selected, or a state
// invariant broke; both indicate a sampling or update bug upstream.
struct DegenerateJump : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InternalInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class ModelKind {
  FermionCounting,       // monitored loss and gain, jump kinds {loss, gain}
  OccupationMeasurement  // generalized n_l measurements, jump kind {occupation}
};

enum class InitialState {
  Neel,            // sites 0, 2, 4, ... occupied
  RandomClassical  // uniform over classical configurations with N = L/2
};

std::string to_string(ModelKind m);
ModelKind model_from_string(const std::string& s);

// Complete definition of one monitored-fermion experiment. Loss and gain
// rates are equal (gamma_- = gamma_+ = gamma); time is measured in 1/J.
struct SimParams {
  ModelKind model = ModelKind::FermionCounting;
  int L = 0;            // lattice size, even
  double J = 1.0;       // hopping amplitude
  double gamma = 1.0;   // jump rate per site
  std::uint64_t seed = 0;
  double t_burn = 0.0;    // burn-in before sampling starts
  double t_sample = 0.0;  // length of the sampling window
  double dt_sample = 1.0; // sample spacing
  int n_traj = 1;
  InitialState init = InitialState::Neel;

  void validate() const {
    if (L < 2 || L % 2 != 0) throw InvalidParameter("L must be even and >= 2");
    if (!(gamma > 0)) throw InvalidParameter("gamma must be positive");
    if (J < 0) throw InvalidParameter("J must be non-negative");
    if (!(dt_sample > 0)) throw InvalidParameter("dt_sample must be positive");
    if (t_burn < 0 || t_sample < 0) throw InvalidParameter("negative time window");
    if (n_traj < 1) throw InvalidParameter("n_traj must be >= 1");
  }
};

}  // namespace monfermi
