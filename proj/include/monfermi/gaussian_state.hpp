#pragma once

#include <Eigen/Dense>
#include <complex>

#include "monfermi/params.hpp"
#include "monfermi/rng.hpp"

namespace monfermi {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Below this occupation (resp. hole) weight a loss (resp. gain) jump has
// Born probability ~0; selecting one signals a sampling bug, so the update
// routines fail fast instead of dividing by ~0.
inline constexpr double kEpsJump = 1e-10;

// Single-particle density matrix D_{l,l'} = <psi†_{l'} psi_l> of a Gaussian
// (Slater-determinant) trajectory state. D is Hermitian, a projector
// (D^2 = D), and fully determines the state.
struct GaussianState {
  Matrix d;
  double time = 0.0;

  int size() const { return static_cast<int>(d.rows()); }
  double occupation(int l) const { return d(l, l).real(); }
  double trace_real() const { return d.trace().real(); }

  double hermiticity_defect() const { return (d - d.adjoint()).cwiseAbs().maxCoeff(); }
  double purity_defect() const { return (d * d - d).cwiseAbs().maxCoeff(); }

  // Roundoff control after jumps: d <- (d + d†)/2.
  void resymmetrize() { d = ((d + d.adjoint()) / 2.0).eval(); }
};

// Charge-density-wave initial state with N = L/2 particles on the even
// sublattice (sites 0, 2, 4, ...; the paper's odd sublattice in 1-based
// indexing).
GaussianState init_neel(int L);

// Diagonal 0/1 state with exactly N occupied sites, uniform over the C(L,N)
// classical configurations. Draws N uniforms (partial Fisher-Yates).
GaussianState init_random_classical(int L, int N, Rng& rng);

// Quantum jump updates. Each pins the touched diagonal entry exactly to 0/1,
// zeroes/sets row and column m consistently, and re-symmetrizes, so that the
// projector property survives 1e5+ jumps.
//
// loss:        D' = D - D e_m e_m† D / D_mm                  (trace -1)
// gain:        D' = D + (1-D) e_m e_m† (1-D) / (1 - D_mm)    (trace +1)
// occupation:  D' = D - D e_m e_m† D / D_mm + e_m e_m†       (trace fixed)
void apply_loss(GaussianState& s, int m);
void apply_gain(GaussianState& s, int m);
void apply_occupation(GaussianState& s, int m);

}  // namespace monfermi
