#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "monfermi/analysis.hpp"
#include "monfermi/fock.hpp"
#include "monfermi/gaussian_state.hpp"
#include "monfermi/lockstep.hpp"
#include "monfermi/observables.hpp"
#include "monfermi/propagator.hpp"
#include "monfermi/temporal.hpp"
#include "monfermi/theory.hpp"
#include "monfermi/trajectory.hpp"
#include "monfermi/version.hpp"

namespace py = pybind11;
using namespace monfermi;

namespace {

// One workspace per (L, J) kept alive for the module lifetime; python-facing
// helpers stay stateless that way.
const FourierWorkspace& workspace(int L, double J) {
  static std::map<std::pair<int, double>, std::unique_ptr<FourierWorkspace>> cache;
  auto key = std::make_pair(L, J);
  auto it = cache.find(key);
  if (it == cache.end())
    it = cache.emplace(key, std::make_unique<FourierWorkspace>(L, J)).first;
  return *it->second;
}

SimParams params_from_kwargs(const std::string& model, int L, double J, double gamma,
                             std::uint64_t seed, double t_burn, double t_sample,
                             double dt_sample, const std::string& init) {
  SimParams p;
  p.model = model_from_string(model);
  p.L = L;
  p.J = J;
  p.gamma = gamma;
  p.seed = seed;
  p.t_burn = t_burn;
  p.t_sample = t_sample;
  p.dt_sample = dt_sample;
  p.init = init == "random_classical" ? InitialState::RandomClassical : InitialState::Neel;
  p.validate();
  return p;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Monitored free fermions: Gaussian quantum-jump trajectories, "
            "steady-state observables, and field-theory predictions";
  m.attr("__version__") = kVersion;

  py::register_exception<InvalidParameter>(m, "InvalidParameterError", PyExc_ValueError);
  py::register_exception<DegenerateJump>(m, "DegenerateJumpError", PyExc_RuntimeError);

  // --- states and jumps -----------------------------------------------------
  m.def("init_neel", [](int L) { return init_neel(L).d; }, py::arg("L"),
        "Charge-density-wave state, sites 0,2,4,... occupied");
  m.def("init_random_classical",
        [](int L, int N, std::uint64_t seed) {
          Rng rng(seed);
          return init_random_classical(L, N, rng).d;
        },
        py::arg("L"), py::arg("N"), py::arg("seed") = 0);
  m.def("evolve_unitary",
        [](const Matrix& d, double tau, double J) {
          GaussianState s{d, 0.0};
          evolve_unitary(s, tau, workspace(static_cast<int>(d.rows()), J));
          return s.d;
        },
        py::arg("d"), py::arg("tau"), py::arg("J") = 1.0);
  m.def("apply_loss", [](const Matrix& d, int m) { GaussianState s{d, 0.0}; apply_loss(s, m); return s.d; });
  m.def("apply_gain", [](const Matrix& d, int m) { GaussianState s{d, 0.0}; apply_gain(s, m); return s.d; });
  m.def("apply_occupation",
        [](const Matrix& d, int m) { GaussianState s{d, 0.0}; apply_occupation(s, m); return s.d; });

  // --- trajectories ---------------------------------------------------------
  m.def("run_trajectory",
        [](const std::string& model, int L, double J, double gamma, std::uint64_t seed,
           double t_burn, double t_sample, double dt_sample, const std::string& init,
           std::uint64_t traj_index, bool record_events) {
          const SimParams p = params_from_kwargs(model, L, J, gamma, seed, t_burn, t_sample,
                                                 dt_sample, init);
          RunOptions opts;
          opts.record_events = record_events;
          const auto t =
              run_trajectory(p, grid_from_params(p), workspace(L, J), traj_index, opts);
          py::dict out;
          out["times"] = t.times;
          out["z"] = t.z;
          out["jump_counts"] = t.jump_counts;
          if (record_events) {
            py::list ev;
            for (const auto& e : t.events) {
              const char* kind = e.kind == JumpEvent::Kind::Loss
                                     ? "loss"
                                     : (e.kind == JumpEvent::Kind::Gain ? "gain" : "occupation");
              ev.append(py::make_tuple(e.time, e.site, kind));
            }
            out["events"] = ev;
          }
          return out;
        },
        py::arg("model"), py::arg("L"), py::arg("J"), py::arg("gamma"), py::arg("seed"),
        py::arg("t_burn"), py::arg("t_sample"), py::arg("dt_sample"),
        py::arg("init") = "neel", py::arg("traj_index") = 0, py::arg("record_events") = false);

  // --- observables ----------------------------------------------------------
  m.def("correlation_profile", &obs::correlation_profile, py::arg("d"));
  m.def("subsystem_entropy",
        [](const Matrix& d, const std::vector<int>& sites) {
          return obs::subsystem_entropy(d, sites);
        });
  m.def("second_cumulant", [](const Matrix& d, const std::vector<int>& sites) {
    return obs::second_cumulant(d, sites);
  });
  m.def("chord_length", &obs::chord_length, py::arg("ell"), py::arg("L"));
  m.def("build_ell_grid", &obs::build_ell_grid, py::arg("L"), py::arg("n_ell"));
  m.def("mutual_information_i2",
        [](const Matrix& d, int ell_a, int ell_b, int ell_c, int origin) {
          const int L = static_cast<int>(d.rows());
          return obs::mutual_information_i2(d, {ell_a, ell_b, ell_c, origin, L});
        },
        py::arg("d"), py::arg("ell_a"), py::arg("ell_b"), py::arg("ell_c"),
        py::arg("origin") = 0);
  m.def("tripartite_i3",
        [](const Matrix& d, int ell_a, int ell_b, int ell_c, int origin) {
          const int L = static_cast<int>(d.rows());
          return obs::tripartite_i3(d, {ell_a, ell_b, ell_c, origin, L});
        },
        py::arg("d"), py::arg("ell_a"), py::arg("ell_b"), py::arg("ell_c"),
        py::arg("origin") = 0);
  m.def("cross_ratio", [](int ell_a, int ell_b, int ell_c, int L, int origin) {
    return obs::cross_ratio({ell_a, ell_b, ell_c, origin, L});
  }, py::arg("ell_a"), py::arg("ell_b"), py::arg("ell_c"), py::arg("L"), py::arg("origin") = 0);

  // --- theory ---------------------------------------------------------------
  m.def("tilde_c", &theory::tilde_c, py::arg("u"), py::arg("n") = 0.5);
  m.def("gaussian_cq", [](double q, double n, double J, double gamma, double beta) {
    return theory::gaussian_cq(q, {n, J, gamma, beta});
  }, py::arg("q"), py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0,
     py::arg("beta") = 0.5);
  m.def("gaussian_cl", [](double l, double n, double J, double gamma, double beta) {
    return theory::gaussian_cl(l, {n, J, gamma, beta});
  }, py::arg("l"), py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0,
     py::arg("beta") = 0.5);
  m.def("gaussian_entropy", [](double ell, double n, double J, double gamma, double beta) {
    return theory::gaussian_entropy(ell, {n, J, gamma, beta});
  }, py::arg("ell"), py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0,
     py::arg("beta") = 0.5);
  m.def("scales", [](double n, double J, double gamma, double beta) {
    const auto s = theory::scales({n, J, gamma, beta});
    py::dict d;
    d["l0"] = s.l0;
    d["tau0"] = s.tau0;
    d["nu"] = s.nu;
    d["g0"] = s.g0;
    d["v0"] = s.v0;
    d["l_star"] = s.l_star;
    d["q_c"] = s.q_c;
    d["l_c"] = s.l_c;
    d["ell_max_c"] = s.ell_max_c;
    return d;
  }, py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0, py::arg("beta") = 0.5);
  m.def("predicted_c_ell", [](double ell, double n, double J, double gamma, double beta) {
    return theory::predicted_c_ell(ell, {n, J, gamma, beta});
  }, py::arg("ell"), py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0,
     py::arg("beta") = 0.5);

  // --- temporal references --------------------------------------------------
  m.def("unconditional_c0_fc", &temporal::unconditional_c0_fc, py::arg("l"), py::arg("t"),
        py::arg("J") = 1.0, py::arg("gamma") = 1.0);
  m.def("unconditional_c0_om", &temporal::unconditional_c0_om, py::arg("l"), py::arg("t"),
        py::arg("n") = 0.5, py::arg("J") = 1.0, py::arg("gamma") = 1.0);
  m.def("ssep_simulate",
        [](int L, int N, double rate, double t_start, double dt, int n, std::uint64_t seed,
           bool random_initial) {
          Rng rng(seed);
          return temporal::ssep_simulate(L, N, rate, {t_start, dt, n}, rng, random_initial).z;
        },
        py::arg("L"), py::arg("N"), py::arg("rate"), py::arg("t_start"), py::arg("dt"),
        py::arg("n"), py::arg("seed") = 0, py::arg("random_initial") = true);

  // --- oracle ---------------------------------------------------------------
  m.def("oracle_check", [](int L, const std::string& model, int n_jumps, std::uint64_t seed,
                           double J, double gamma) {
    const auto rep = lockstep_compare(L, model_from_string(model), J, gamma, n_jumps, seed);
    py::dict d;
    d["n_jumps"] = rep.n_jumps;
    d["max_dd"] = rep.max_dd;
    d["max_weight_diff"] = rep.max_weight_diff;
    d["trace_drift"] = rep.trace_drift;
    d["records_equal"] = rep.records_equal;
    return d;
  }, py::arg("L"), py::arg("model") = "fc", py::arg("n_jumps") = 200, py::arg("seed") = 1,
     py::arg("J") = 1.0, py::arg("gamma") = 1.0);

  // --- analysis ---------------------------------------------------------
  m.def("power_law_fit",
        [](const std::vector<double>& x, const std::vector<double>& y,
           const std::vector<double>& yerr, double lo, double hi) {
          analysis::Curve c{x, y, yerr};
          const auto f = analysis::power_law_fit(c, lo, hi);
          return py::make_tuple(f.exponent, f.exponent_err, f.amplitude);
        },
        py::arg("x"), py::arg("y"), py::arg("yerr") = std::vector<double>{},
        py::arg("lo") = 0.0, py::arg("hi") = 1e300);
}
