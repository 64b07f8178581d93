#include "monfermi/fock.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <mutex>

namespace monfermi::fock {

namespace {

int jw_sign(std::uint32_t bits, int l) {
  const std::uint32_t below = bits & ((1u << l) - 1u);
  return (std::popcount(below) % 2 == 0) ? 1 : -1;
}

struct Spectrum {
  Eigen::MatrixXd vecs;  // H is real symmetric in this basis
  Eigen::VectorXd vals;  // eigenvalues at J = 1
};

// Dense many-body Hamiltonian at J = 1, -sum_l (c†_l c_{l+1} + h.c.) with PBC.
Eigen::MatrixXd build_hamiltonian(int L) {
  const int dim = 1 << L;
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(dim); ++n) {
    for (int l = 0; l < L; ++l) {
      const int lp = (l + 1) % L;
      // c†_lp c_l |n>
      if ((n >> l & 1u) && !(n >> lp & 1u)) {
        const std::uint32_t m1 = n & ~(1u << l);
        const int s = jw_sign(n, l) * jw_sign(m1, lp);
        h(m1 | (1u << lp), n) += -1.0 * s;
      }
      // c†_l c_lp |n>
      if ((n >> lp & 1u) && !(n >> l & 1u)) {
        const std::uint32_t m1 = n & ~(1u << lp);
        const int s = jw_sign(n, lp) * jw_sign(m1, l);
        h(m1 | (1u << l), n) += -1.0 * s;
      }
    }
  }
  return h;
}

const Spectrum& spectrum(int L) {
  static std::map<int, Spectrum> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(L);
  if (it == cache.end()) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(build_hamiltonian(L));
    it = cache.emplace(L, Spectrum{es.eigenvectors(), es.eigenvalues()}).first;
  }
  return it->second;
}

}  // namespace

int FockState::sites() const {
  int L = 0;
  while ((1 << L) < amp.size()) ++L;
  return L;
}

FockState fock_from_bits(int L, std::uint32_t bits) {
  if (L < 1 || L > kMaxSites) throw InvalidParameter("fock oracle: L out of range");
  FockState s;
  s.amp = Eigen::VectorXcd::Zero(1 << L);
  s.amp(bits) = 1.0;
  return s;
}

FockState fock_neel(int L) {
  std::uint32_t bits = 0;
  for (int l = 0; l < L; l += 2) bits |= 1u << l;
  return fock_from_bits(L, bits);
}

FockState fock_from_orbitals(int L, const Matrix& orbitals) {
  if (L < 1 || L > kMaxSites) throw InvalidParameter("fock oracle: L out of range");
  if (orbitals.rows() != L) throw InvalidParameter("fock_from_orbitals: row count != L");
  const int N = static_cast<int>(orbitals.cols());
  const int dim = 1 << L;
  FockState s;
  s.amp = Eigen::VectorXcd::Zero(dim);
  Matrix sub(N, N);
  for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(dim); ++n) {
    if (std::popcount(n) != N) continue;
    int row = 0;
    for (int l = 0; l < L; ++l)
      if ((n >> l) & 1u) sub.row(row++) = orbitals.row(l);
    s.amp(n) = sub.determinant();
  }
  const double nrm = s.amp.norm();
  if (nrm < 1e-12) throw InvalidParameter("fock_from_orbitals: orbitals are degenerate");
  s.amp /= nrm;
  return s;
}

void oracle_evolve(FockState& s, double tau, double J) {
  if (tau < 0) throw InvalidParameter("oracle_evolve: negative tau");
  const int L = s.sites();
  if (L > kMaxSites) throw InvalidParameter("oracle_evolve: L exceeds oracle capacity");
  if (tau == 0) return;
  const Spectrum& sp = spectrum(L);
  Eigen::VectorXcd c = sp.vecs.transpose() * s.amp;
  for (int i = 0; i < c.size(); ++i) c(i) *= std::polar(1.0, -J * sp.vals(i) * tau);
  s.amp = sp.vecs * c;
  s.time += tau;
}

double oracle_apply_jump(FockState& s, JumpKind kind, int m) {
  const int L = s.sites();
  const int dim = 1 << L;
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(dim);
  for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(dim); ++n) {
    const Complex a = s.amp(n);
    if (a == Complex(0, 0)) continue;
    const bool occ = (n >> m) & 1u;
    switch (kind) {
      case JumpKind::Loss:
        if (occ) out(n & ~(1u << m)) += static_cast<double>(jw_sign(n, m)) * a;
        break;
      case JumpKind::Gain:
        if (!occ) out(n | (1u << m)) += static_cast<double>(jw_sign(n, m)) * a;
        break;
      case JumpKind::Occupation:
        if (occ) out(n) += a;
        break;
    }
  }
  const double w = out.squaredNorm();
  if (w <= kEpsJump) throw DegenerateJump("fock oracle: zero-norm jump result");
  s.amp = out / std::sqrt(w);
  return w;
}

Matrix oracle_density_matrix(const FockState& s) {
  const int L = s.sites();
  const int dim = 1 << L;
  Matrix d = Matrix::Zero(L, L);
  for (std::uint32_t n = 0; n < static_cast<std::uint32_t>(dim); ++n) {
    const Complex a = s.amp(n);
    if (a == Complex(0, 0)) continue;
    for (int l = 0; l < L; ++l) {
      if (!((n >> l) & 1u)) continue;
      d(l, l) += std::norm(a);
      const std::uint32_t n1 = n & ~(1u << l);
      const int s1 = jw_sign(n, l);
      for (int lp = 0; lp < L; ++lp) {
        if (lp == l || ((n1 >> lp) & 1u)) continue;
        const int s2 = jw_sign(n1, lp);
        const std::uint32_t nm = n1 | (1u << lp);
        // psi†_lp psi_l maps |n> to s1 s2 |nm>, so D_{l,lp} picks up
        // conj(a_nm) s1 s2 a_n.
        d(l, lp) += static_cast<double>(s1 * s2) * std::conj(s.amp(nm)) * a;
      }
    }
  }
  return d;
}

double oracle_subsystem_entropy(const FockState& s, int ell) {
  const int L = s.sites();
  if (ell < 0 || ell > L) throw InvalidParameter("oracle_subsystem_entropy: bad segment");
  if (ell == 0 || ell == L) return 0.0;
  const int da = 1 << ell;
  const int db = 1 << (L - ell);
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(da, da);
  for (int b = 0; b < db; ++b) {
    for (int i = 0; i < da; ++i) {
      const Complex ai = s.amp(i | (b << ell));
      if (ai == Complex(0, 0)) continue;
      for (int j = 0; j < da; ++j) rho(i, j) += ai * std::conj(s.amp(j | (b << ell)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(rho, Eigen::EigenvaluesOnly);
  double entropy = 0.0;
  for (int i = 0; i < da; ++i) {
    const double p = es.eigenvalues()(i);
    if (p > 1e-14) entropy -= p * std::log(p);
  }
  return entropy;
}

}  // namespace monfermi::fock
