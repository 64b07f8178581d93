#include "monfermi/gaussian_state.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

namespace monfermi {

GaussianState init_neel(int L) {
  if (L < 2 || L % 2 != 0) throw InvalidParameter("init_neel: L must be even and >= 2");
  GaussianState s;
  s.d = Matrix::Zero(L, L);
  for (int l = 0; l < L; l += 2) s.d(l, l) = 1.0;
  return s;
}

GaussianState init_random_classical(int L, int N, Rng& rng) {
  if (L < 1) throw InvalidParameter("init_random_classical: L must be positive");
  if (N < 0 || N > L) throw InvalidParameter("init_random_classical: N out of range");
  std::vector<int> sites(L);
  std::iota(sites.begin(), sites.end(), 0);
  for (int i = 0; i < N; ++i) {
    const auto j = i + rng.uniform_int(L - i);
    std::swap(sites[i], sites[j]);
  }
  GaussianState s;
  s.d = Matrix::Zero(L, L);
  for (int i = 0; i < N; ++i) s.d(sites[i], sites[i]) = 1.0;
  return s;
}

void apply_loss(GaussianState& s, int m) {
  const double dmm = s.d(m, m).real();
  if (dmm <= kEpsJump) throw DegenerateJump("loss on (nearly) empty site");
  const Vector col = s.d.col(m);
  s.d.noalias() -= (col / dmm) * col.adjoint();
  s.d.row(m).setZero();
  s.d.col(m).setZero();
  s.resymmetrize();
}

void apply_gain(GaussianState& s, int m) {
  const double hole = 1.0 - s.d(m, m).real();
  if (hole <= kEpsJump) throw DegenerateJump("gain on (nearly) occupied site");
  Vector v = -s.d.col(m);
  v(m) += 1.0;
  s.d.noalias() += (v / hole) * v.adjoint();
  s.d.row(m).setZero();
  s.d.col(m).setZero();
  s.d(m, m) = 1.0;
  s.resymmetrize();
}

void apply_occupation(GaussianState& s, int m) {
  const double dmm = s.d(m, m).real();
  if (dmm <= kEpsJump) throw DegenerateJump("occupation jump on (nearly) empty site");
  const Vector col = s.d.col(m);
  s.d.noalias() -= (col / dmm) * col.adjoint();
  s.d.row(m).setZero();
  s.d.col(m).setZero();
  s.d(m, m) = 1.0;
  s.resymmetrize();
}

}  // namespace monfermi
