#pragma once

#include <cstdint>

#include "monfermi/params.hpp"

namespace monfermi {

struct LockstepReport {
  int n_jumps = 0;
  double max_dd = 0.0;           // max |D_gauss - D_fock| over all jumps
  double max_weight_diff = 0.0;  // Gaussian probability vs oracle Born weight
  double trace_drift = 0.0;      // |trace - expected| worst case
  bool records_equal = true;     // same (kind, site) sequence
};

// Drives the production Gaussian engine and the exact Fock oracle through the
// same uniform-random-number stream (waiting time first, then outcome; see
// trajectory.hpp) and compares jump records, Born weights, and the
// single-particle density matrices after every jump. L <= 10.
LockstepReport lockstep_compare(int L, ModelKind model, double J, double gamma, int n_jumps,
                                std::uint64_t seed);

}  // namespace monfermi
