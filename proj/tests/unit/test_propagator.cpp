#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "monfermi/gaussian_state.hpp"
#include "monfermi/propagator.hpp"

using namespace monfermi;

namespace {

// Dense single-particle hopping matrix with PBC (test-side oracle).
Eigen::MatrixXd hopping_matrix(int L, double J) {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(L, L);
  for (int l = 0; l < L; ++l) {
    h(l, (l + 1) % L) = -J;
    h((l + 1) % L, l) = -J;
  }
  return h;
}

Matrix dense_propagate(const Matrix& d, int L, double J, double tau) {
  const Eigen::MatrixXd h = hopping_matrix(L, J);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
  Vector phases(L);
  for (int i = 0; i < L; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * tau);
  const Matrix u =
      es.eigenvectors().cast<Complex>() * phases.asDiagonal() *
      es.eigenvectors().transpose().cast<Complex>();
  return u * d * u.adjoint();
}

}  // namespace

TEST_SUITE_BEGIN("propagator");

TEST_CASE("tau = 0 is the identity") {
  FourierWorkspace ws(8, 1.0);
  GaussianState s = init_neel(8);
  const Matrix before = s.d;
  evolve_unitary(s, 0.0, ws);
  CHECK((s.d - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK_THROWS_AS(evolve_unitary(s, -0.1, ws), InvalidParameter);
}

TEST_CASE("FFT conjugation matches the dense matrix exponential at L = 6") {
  const int L = 6;
  const double tau = 0.3;
  FourierWorkspace ws(L, 1.0);
  GaussianState s = init_neel(L);
  evolve_unitary(s, tau, ws);
  const Matrix expect = dense_propagate(init_neel(L).d, L, 1.0, tau);
  CHECK((s.d - expect).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("unitary conjugation preserves trace and spectrum") {
  const int L = 10;
  FourierWorkspace ws(L, 0.7);
  Rng rng(5);
  GaussianState s = init_random_classical(L, 5, rng);
  evolve_unitary(s, 0.9, ws);  // generic non-diagonal state
  const double tr0 = s.trace_real();
  Eigen::SelfAdjointEigenSolver<Matrix> es0(s.d, Eigen::EigenvaluesOnly);
  evolve_unitary(s, 2.3, ws);
  CHECK(std::abs(s.trace_real() - tr0) < 1e-10);
  Eigen::SelfAdjointEigenSolver<Matrix> es1(s.d, Eigen::EigenvaluesOnly);
  CHECK((es0.eigenvalues() - es1.eigenvalues()).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(s.hermiticity_defect() < 1e-12);
}

TEST_CASE("momentum representation round-trips and evolves consistently") {
  const int L = 12;
  FourierWorkspace ws(L, 1.0);
  GaussianState s = init_neel(L);
  evolve_unitary(s, 0.41, ws);

  const Matrix dm = ws.to_momentum(s.d);
  CHECK((ws.to_real(dm) - s.d).cwiseAbs().maxCoeff() < 1e-12);

  // evolve in both representations and compare
  Matrix dm2 = dm;
  ws.evolve_momentum(dm2, 0.53);
  GaussianState s2 = s;
  evolve_unitary(s2, 0.53, ws);
  CHECK((ws.to_real(dm2) - s2.d).cwiseAbs().maxCoeff() < 1e-12);

  Eigen::VectorXd occ;
  ws.occupations_from_momentum(dm2, occ);
  for (int l = 0; l < L; ++l) CHECK(occ(l) == doctest::Approx(s2.d(l, l).real()).epsilon(1e-12));
}

TEST_SUITE_END();
