#include <doctest.h>

#include <cmath>

#include "monfermi/fock.hpp"
#include "monfermi/lockstep.hpp"
#include "monfermi/observables.hpp"
#include "monfermi/propagator.hpp"
#include "monfermi/trajectory.hpp"

using namespace monfermi;

TEST_SUITE_BEGIN("fock");

TEST_CASE("oracle evolve: identity at tau=0 and capacity error") {
  auto s = fock::fock_neel(4);
  const Eigen::VectorXcd before = s.amp;
  fock::oracle_evolve(s, 0.0, 1.0);
  CHECK((s.amp - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(fock::fock_from_bits(12, 0), InvalidParameter);
}

TEST_CASE("single particle: many-body propagator equals the one-body propagator") {
  const int L = 4;
  const double tau = 0.6;
  auto s = fock::fock_from_bits(L, 1u << 2);  // particle at site 2
  fock::oracle_evolve(s, tau, 1.0);

  // one-particle sector: amplitudes on |e_l> must match U_{l,2}
  FourierWorkspace ws(L, 1.0);
  GaussianState g;
  g.d = Matrix::Zero(L, L);
  g.d(2, 2) = 1.0;
  evolve_unitary(g, tau, ws);
  // compare |amp_l|^2 with the evolved density
  for (int l = 0; l < L; ++l) {
    CHECK(std::norm(s.amp(1u << l)) == doctest::Approx(g.d(l, l).real()).epsilon(1e-12));
  }
  CHECK(s.norm() == doctest::Approx(1.0));
}

TEST_CASE("neel L=6: oracle density matrix matches the Gaussian engine after evolution") {
  const int L = 6;
  const double tau = 0.7;
  auto s = fock::fock_neel(L);
  fock::oracle_evolve(s, tau, 1.0);
  FourierWorkspace ws(L, 1.0);
  GaussianState g = init_neel(L);
  evolve_unitary(g, tau, ws);
  const Matrix d = fock::oracle_density_matrix(s);
  CHECK((d - g.d).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("jump operators: weights and Pauli exclusion") {
  auto s = fock::fock_from_bits(2, 0b01);
  const double w = fock::oracle_apply_jump(s, fock::JumpKind::Loss, 0);
  CHECK(w == doctest::Approx(1.0));
  CHECK(std::norm(s.amp(0)) == doctest::Approx(1.0));

  auto t = fock::fock_from_bits(2, 0b01);
  CHECK_THROWS_AS(fock::oracle_apply_jump(t, fock::JumpKind::Gain, 0), DegenerateJump);
}

TEST_CASE("jump weights equal Gaussian occupations (Wick consistency)") {
  const int L = 6;
  auto s = fock::fock_neel(L);
  fock::oracle_evolve(s, 0.9, 1.0);
  const Matrix d = fock::oracle_density_matrix(s);
  for (int m = 0; m < L; ++m) {
    auto loss = s;
    const double w = fock::oracle_apply_jump(loss, fock::JumpKind::Loss, m);
    CHECK(w == doctest::Approx(d(m, m).real()).epsilon(1e-12));
    auto gain = s;
    const double wg = fock::oracle_apply_jump(gain, fock::JumpKind::Gain, m);
    CHECK(wg == doctest::Approx(1.0 - d(m, m).real()).epsilon(1e-12));
  }
}

TEST_CASE("density matrix of simple states") {
  auto s = fock::fock_from_bits(2, 0b01);
  const Matrix d = fock::oracle_density_matrix(s);
  CHECK(d(0, 0).real() == doctest::Approx(1.0));
  CHECK(d(1, 1).real() == doctest::Approx(0.0));

  // (|10> + |01>)/sqrt(2): off-diagonal magnitude 1/2, trace 1
  fock::FockState pair = fock::fock_from_bits(2, 0);
  pair.amp.setZero();
  pair.amp(0b01) = 1.0 / std::sqrt(2.0);
  pair.amp(0b10) = 1.0 / std::sqrt(2.0);
  const Matrix dp = fock::oracle_density_matrix(pair);
  CHECK(std::abs(dp(0, 1)) == doctest::Approx(0.5));
  CHECK(dp.trace().real() == doctest::Approx(1.0));

  // any Slater determinant: D^2 = D
  auto slater = fock::fock_neel(6);
  fock::oracle_evolve(slater, 1.3, 1.0);
  const Matrix ds = fock::oracle_density_matrix(slater);
  CHECK((ds * ds - ds).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("prefix entropy of the 2-site Bell-analog state is ln 2") {
  fock::FockState pair = fock::fock_from_bits(2, 0);
  pair.amp.setZero();
  pair.amp(0b01) = 1.0 / std::sqrt(2.0);
  pair.amp(0b10) = 1.0 / std::sqrt(2.0);
  CHECK(fock::oracle_subsystem_entropy(pair, 1) == doctest::Approx(std::log(2.0)));
}

TEST_CASE("fermi sea L=8: Gaussian entropy equals the many-body entropy at ell=4") {
  // Slater determinant of the 4 lowest plane waves (half-filled PBC shell,
  // degeneracy at the Fermi level resolved by the k choice).
  const int L = 8, N = 4;
  Matrix orbitals(L, N);
  const int ks[N] = {0, 1, 7, 2};
  for (int a = 0; a < N; ++a)
    for (int l = 0; l < L; ++l)
      orbitals(l, a) = std::polar(1.0 / std::sqrt(double(L)), 2.0 * M_PI * ks[a] * l / L);
  const auto sea = fock::fock_from_orbitals(L, orbitals);
  const Matrix d = fock::oracle_density_matrix(sea);
  CHECK(d.trace().real() == doctest::Approx(4.0));
  CHECK((d * d - d).cwiseAbs().maxCoeff() < 1e-12);

  std::vector<int> seg = {0, 1, 2, 3};
  const double s_gauss = obs::subsystem_entropy(d, seg);
  const double s_many = fock::oracle_subsystem_entropy(sea, 4);
  CHECK(s_gauss == doctest::Approx(s_many).epsilon(1e-8));

  // same agreement on a generic evolved Slater state
  auto s = fock::fock_neel(L);
  fock::oracle_evolve(s, 1.1, 1.0);
  const Matrix d2 = fock::oracle_density_matrix(s);
  CHECK(obs::subsystem_entropy(d2, seg) ==
        doctest::Approx(fock::oracle_subsystem_entropy(s, 4)).epsilon(1e-8));
}

TEST_CASE("lockstep theorem: identical records and max|dD| < 1e-10") {
  for (const int L : {2, 4, 6, 8}) {
    for (const auto model : {ModelKind::FermionCounting, ModelKind::OccupationMeasurement}) {
      const int n_jumps = L == 8 ? 120 : 200;
      const auto rep = lockstep_compare(L, model, 1.0, 1.0, n_jumps, 7u * L + 1);
      CAPTURE(L);
      CAPTURE(static_cast<int>(model));
      CHECK(rep.records_equal);
      CHECK(rep.n_jumps > 0);
      CHECK(rep.max_dd < 1e-10);
      CHECK(rep.max_weight_diff < 1e-12);
      CHECK(rep.trace_drift < 1e-10);
    }
  }
}

TEST_CASE("L=2, J=0: both engines realize the exact telegraph statistics") {
  const auto rep = lockstep_compare(2, ModelKind::FermionCounting, 0.0, 1.0, 300, 5);
  CHECK(rep.records_equal);
  CHECK(rep.max_dd < 1e-12);
}

TEST_SUITE_END();
