#pragma once

#include <fftw3.h>

#include <Eigen/Dense>
#include <vector>

#include "monfermi/gaussian_state.hpp"

namespace monfermi {

// FFT workhorse for the PBC hopping Hamiltonian, which is circulant and
// therefore diagonalized by the discrete Fourier transform with dispersion
// xi_q = -2 J cos(q), q = 2 pi k / L.
//
// Plans are created once per (L) and reused; fftw_execute_dft on foreign
// arrays makes the object shareable across states of the same size.
class FourierWorkspace {
 public:
  FourierWorkspace(int L, double J);
  ~FourierWorkspace();
  FourierWorkspace(const FourierWorkspace&) = delete;
  FourierWorkspace& operator=(const FourierWorkspace&) = delete;

  int size() const { return L_; }
  double hopping() const { return J_; }
  double dispersion(int k) const { return xi_[k]; }

  // Real-space propagation d <- U d U†, U = exp(-i H tau), via FFT
  // conjugation in O(L^2 log L). Exact for PBC; preserves the spectrum of d.
  void evolve_real(Matrix& d, double tau) const;

  // Basis changes between the site and momentum representations of d.
  Matrix to_momentum(const Matrix& d_real) const;
  Matrix to_real(const Matrix& d_mom) const;

  // Momentum-space propagation is an elementwise phase twist, O(L^2).
  void evolve_momentum(Matrix& dm, double tau) const;

  // Real-space occupations <n_l> from the momentum representation: one pass
  // of wrapped-diagonal sums plus a single length-L transform, O(L^2).
  void occupations_from_momentum(const Matrix& dm, Eigen::VectorXd& out) const;

 private:
  void phases(double tau, Vector& u) const;  // u_k = exp(-i xi_k tau)
  void cols_fwd(Matrix& m) const;
  void cols_bwd(Matrix& m) const;
  void rows_fwd(Matrix& m) const;
  void rows_bwd(Matrix& m) const;

  int L_;
  double J_;
  std::vector<double> xi_;
  fftw_plan col_fwd_ = nullptr, col_bwd_ = nullptr;
  fftw_plan row_fwd_ = nullptr, row_bwd_ = nullptr;
  fftw_plan vec_bwd_ = nullptr;
  mutable Vector diag_buf_;
};

// Spec-facing wrapper on a real-space state.
void evolve_unitary(GaussianState& s, double tau, const FourierWorkspace& ws);

}  // namespace monfermi
