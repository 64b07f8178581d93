#include "monfermi/lockstep.hpp"

#include <cmath>

#include "monfermi/fock.hpp"
#include "monfermi/trajectory.hpp"

namespace monfermi {

LockstepReport lockstep_compare(int L, ModelKind model, double J, double gamma, int n_jumps,
                                std::uint64_t seed) {
  if (L > fock::kMaxSites) throw InvalidParameter("lockstep: L exceeds oracle capacity");

  SimParams params;
  params.model = model;
  params.L = L;
  params.J = J;
  params.gamma = gamma;
  params.seed = seed;

  FourierWorkspace ws(L, J);
  Rng rng(seed);
  GaussianTrajectory gauss(params, ws, rng);
  gauss.set_state(init_neel(L));
  fock::FockState psi = fock::fock_neel(L);

  LockstepReport rep;
  const double n0 = L / 2.0;
  std::int64_t delta_n = 0;

  for (int j = 0; j < n_jumps; ++j) {
    // Shared draw order: waiting time (u1) then outcome (u2).
    const double tau = gauss.sample_waiting_time();
    if (!std::isfinite(tau)) break;
    gauss.evolve(tau);
    fock::oracle_evolve(psi, tau, J);

    // Each engine builds its own probability vector; the same u2 must then
    // select the same outcome if the physics agrees.
    const Eigen::VectorXd pg = gauss.probability_vector();
    const Matrix d_pre = fock::oracle_density_matrix(psi);
    Eigen::VectorXd pf(pg.size());
    if (model == ModelKind::FermionCounting) {
      for (int l = 0; l < L; ++l) {
        pf(l) = d_pre(l, l).real() / L;
        pf(L + l) = (1.0 - d_pre(l, l).real()) / L;
      }
    } else {
      const double n_tot = d_pre.trace().real();
      for (int l = 0; l < L; ++l) pf(l) = d_pre(l, l).real() / n_tot;
    }
    for (int i = 0; i < pf.size(); ++i)
      if (pf(i) < 1e-12) pf(i) = 0.0;

    const double u2 = rng.uniform();
    const int pick_g = GaussianTrajectory::select_outcome(pg, u2);
    const int pick_f = GaussianTrajectory::select_outcome(pf, u2);
    if (pick_g != pick_f) {
      rep.records_equal = false;
      break;
    }

    const Eigen::VectorXd occ_g = gauss.occupations();
    const JumpEvent ev = gauss.apply_outcome(pick_g);
    fock::JumpKind kind = fock::JumpKind::Occupation;
    // Wick consistency: the oracle's Born weight must equal the occupation
    // (resp. hole) weight the Gaussian engine assigned to the outcome.
    double expected_weight = occ_g(ev.site);
    if (ev.kind == JumpEvent::Kind::Loss) {
      kind = fock::JumpKind::Loss;
      --delta_n;
    } else if (ev.kind == JumpEvent::Kind::Gain) {
      kind = fock::JumpKind::Gain;
      expected_weight = 1.0 - expected_weight;
      ++delta_n;
    }
    const double w = fock::oracle_apply_jump(psi, kind, ev.site);
    rep.max_weight_diff = std::max(rep.max_weight_diff, std::abs(w - expected_weight));

    const Matrix d_gauss = gauss.real_state().d;
    const Matrix d_fock = fock::oracle_density_matrix(psi);
    rep.max_dd = std::max(rep.max_dd, (d_gauss - d_fock).cwiseAbs().maxCoeff());

    const double expected_trace =
        model == ModelKind::OccupationMeasurement ? n0 : n0 + static_cast<double>(delta_n);
    rep.trace_drift = std::max(rep.trace_drift, std::abs(gauss.trace() - expected_trace));
    ++rep.n_jumps;
  }
  return rep;
}

}  // namespace monfermi
