#include "monfermi/propagator.hpp"

#include <cmath>
#include <mutex>

namespace monfermi {

namespace {
// FFTW planning is not thread safe; execution on distinct data is.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(Matrix& m) { return reinterpret_cast<fftw_complex*>(m.data()); }
fftw_complex* as_fftw(Vector& v) { return reinterpret_cast<fftw_complex*>(v.data()); }
}  // namespace

FourierWorkspace::FourierWorkspace(int L, double J) : L_(L), J_(J), xi_(L) {
  if (L < 2) throw InvalidParameter("FourierWorkspace: L must be >= 2");
  for (int k = 0; k < L; ++k) xi_[k] = -2.0 * J * std::cos(2.0 * M_PI * k / L);

  Matrix scratch(L, L);
  Vector vec(L);
  const int n[] = {L};
  std::lock_guard<std::mutex> lock(plan_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  // Column-major storage: "cols" transform the row (site) index l with unit
  // stride, "rows" transform the column index l' with stride L.
  col_fwd_ = fftw_plan_many_dft(1, n, L, as_fftw(scratch), nullptr, 1, L,
                                as_fftw(scratch), nullptr, 1, L, FFTW_FORWARD, flags);
  col_bwd_ = fftw_plan_many_dft(1, n, L, as_fftw(scratch), nullptr, 1, L,
                                as_fftw(scratch), nullptr, 1, L, FFTW_BACKWARD, flags);
  row_fwd_ = fftw_plan_many_dft(1, n, L, as_fftw(scratch), nullptr, L, 1,
                                as_fftw(scratch), nullptr, L, 1, FFTW_FORWARD, flags);
  row_bwd_ = fftw_plan_many_dft(1, n, L, as_fftw(scratch), nullptr, L, 1,
                                as_fftw(scratch), nullptr, L, 1, FFTW_BACKWARD, flags);
  vec_bwd_ = fftw_plan_dft_1d(L, as_fftw(vec), as_fftw(vec), FFTW_BACKWARD, flags);
  diag_buf_.resize(L);
}

FourierWorkspace::~FourierWorkspace() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(col_fwd_);
  fftw_destroy_plan(col_bwd_);
  fftw_destroy_plan(row_fwd_);
  fftw_destroy_plan(row_bwd_);
  fftw_destroy_plan(vec_bwd_);
}

void FourierWorkspace::cols_fwd(Matrix& m) const { fftw_execute_dft(col_fwd_, as_fftw(m), as_fftw(m)); }
void FourierWorkspace::cols_bwd(Matrix& m) const { fftw_execute_dft(col_bwd_, as_fftw(m), as_fftw(m)); }
void FourierWorkspace::rows_fwd(Matrix& m) const { fftw_execute_dft(row_fwd_, as_fftw(m), as_fftw(m)); }
void FourierWorkspace::rows_bwd(Matrix& m) const { fftw_execute_dft(row_bwd_, as_fftw(m), as_fftw(m)); }

void FourierWorkspace::phases(double tau, Vector& u) const {
  u.resize(L_);
  for (int k = 0; k < L_; ++k) u(k) = std::polar(1.0, -xi_[k] * tau);
}

void FourierWorkspace::evolve_real(Matrix& d, double tau) const {
  if (tau < 0) throw InvalidParameter("evolve_unitary: negative tau");
  if (tau == 0) return;
  Vector u;
  phases(tau, u);
  // d' = W diag(u) W† d W diag(u*) W†, with W the unitary DFT.
  cols_fwd(d);
  d.array().colwise() *= u.array();
  cols_bwd(d);
  rows_bwd(d);
  d.array().rowwise() *= u.array().conjugate().transpose();
  rows_fwd(d);
  d /= static_cast<double>(L_) * L_;
}

Matrix FourierWorkspace::to_momentum(const Matrix& d_real) const {
  Matrix m = d_real;
  cols_fwd(m);
  rows_bwd(m);
  return m / static_cast<double>(L_);
}

Matrix FourierWorkspace::to_real(const Matrix& d_mom) const {
  Matrix m = d_mom;
  cols_bwd(m);
  rows_fwd(m);
  return m / static_cast<double>(L_);
}

void FourierWorkspace::evolve_momentum(Matrix& dm, double tau) const {
  if (tau < 0) throw InvalidParameter("evolve_unitary: negative tau");
  if (tau == 0) return;
  Vector u;
  phases(tau, u);
  dm.array().colwise() *= u.array();
  dm.array().rowwise() *= u.array().conjugate().transpose();
}

void FourierWorkspace::occupations_from_momentum(const Matrix& dm, Eigen::VectorXd& out) const {
  Vector& s = diag_buf_;
  s.setZero();
  // s_delta = sum_k dm(k, k - delta mod L); column-major pass.
  for (int kp = 0; kp < L_; ++kp) {
    const Complex* col = dm.data() + static_cast<std::ptrdiff_t>(kp) * L_;
    int delta = L_ - kp;  // delta for k = 0 (mod L)
    for (int k = 0; k < L_; ++k) {
      if (delta == L_) delta = 0;
      s(delta) += col[k];
      ++delta;
    }
  }
  fftw_execute_dft(vec_bwd_, as_fftw(s), as_fftw(s));
  out = s.real() / static_cast<double>(L_);
}

void evolve_unitary(GaussianState& s, double tau, const FourierWorkspace& ws) {
  ws.evolve_real(s.d, tau);
  s.time += tau;
}

}  // namespace monfermi
