// monfermi: quantum-jump trajectories of continuously monitored free fermions
// on a 1D lattice, with the matching field-theory predictions and statistical
// post-processing.
//
// Subcommands:
//   simulate      run a seeded trajectory ensemble from a JSON config
//   theory        emit closed-form prediction tables (CSV) on given grids
//   analyze       fits, crossover detection, maxima, CFT collapse (JSON out)
//   oracle-check  lockstep comparison of the Gaussian engine vs the exact
//                 Fock-space oracle at small L

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <filesystem>
#include <iostream>

#include "monfermi/analysis.hpp"
#include "monfermi/ensemble.hpp"
#include "monfermi/io.hpp"
#include "monfermi/lockstep.hpp"
#include "monfermi/observables.hpp"
#include "monfermi/theory.hpp"
#include "monfermi/version.hpp"

using nlohmann::json;
using namespace monfermi;

namespace {

int cmd_simulate(const std::string& config_path, int workers, std::int64_t seed_override,
                 bool resume, const std::string& out_override) {
  json j = io::read_json(config_path);
  if (seed_override >= 0) j["seed"] = static_cast<std::uint64_t>(seed_override);
  if (!out_override.empty()) j["output_dir"] = out_override;
  ens::ExperimentConfig cfg = ens::config_from_json(j);
  if (workers > 0) cfg.workers = workers;
  if (cfg.output_dir.empty()) cfg.output_dir = "monfermi_out";
  if (!resume) {
    const auto ckpt = std::filesystem::path(cfg.output_dir) / "checkpoint.json";
    if (std::filesystem::exists(ckpt)) std::filesystem::remove(ckpt);
  }
  const auto t0 = std::chrono::steady_clock::now();
  ens::EnsembleResult result = ens::run_ensemble(cfg, [](int d, int n) {
    if (d % 10 == 0 || d == n) std::cerr << "\r" << d << "/" << n << " trajectories" << std::flush;
  });
  std::cerr << '\n';
  const auto files = ens::write_result_files(result, cfg.output_dir);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "wrote " << files.size() << " files to " << cfg.output_dir << " in " << secs
            << " s\n";
  return 0;
}

int cmd_theory(double J, double gamma, double n, double beta, const std::string& dir,
               int nq, int nl, int nell) {
  theory::TheoryParams p{n, J, gamma, beta};
  const auto sc = theory::scales(p);
  std::filesystem::create_directories(dir);

  json manifest{{"version", kVersion},
                {"params", {{"J", J}, {"gamma", gamma}, {"n", n}, {"beta", beta}}},
                {"scales",
                 {{"l0", sc.l0},
                  {"tau0", sc.tau0},
                  {"nu", sc.nu},
                  {"g0", sc.g0},
                  {"v0", sc.v0},
                  {"l_star", sc.l_star},
                  {"q_c", sc.q_c},
                  {"l_c", sc.l_c},
                  {"ell_max_c", sc.ell_max_c},
                  {"ell_max_i2_x1_16", theory::ell_max_i2(p, 1.0 / 16.0)}}}};

  const std::string cfg = manifest.dump();
  theory::CachedCq cq(p);

  io::CurveFile fq;
  fq.name = "theory_cq";
  for (int i = 1; i <= nq; ++i) {
    const double q = M_PI * i / nq;
    fq.x.push_back(q);
    fq.mean.push_back(theory::gaussian_cq(q, p));
    fq.stderr_.push_back(0.0);
    fq.n_samples.push_back(1);
  }
  fq.config_json = cfg;
  io::write_curve_csv(dir + "/theory_cq.csv", fq);

  io::CurveFile fl;
  fl.name = "theory_cl";
  for (int l = 1; l <= nl; ++l) {
    fl.x.push_back(l);
    fl.mean.push_back(theory::gaussian_cl(l, cq));
    fl.stderr_.push_back(0.0);
    fl.n_samples.push_back(1);
  }
  fl.config_json = cfg;
  io::write_curve_csv(dir + "/theory_cl.csv", fl);

  io::CurveFile fs;
  fs.name = "theory_entropy";
  bool warned = false;
  for (int i = 1; i <= nell; ++i) {
    const double ell = std::pow(10.0, 3.0 * i / nell);  // 1 .. 1000, log grid
    if (ell <= sc.l0 && !warned) {
      std::cerr << "note: ell <= l0 points are outside the asymptotic domain\n";
      warned = true;
    }
    fs.x.push_back(ell);
    fs.mean.push_back(theory::gaussian_entropy(ell, cq));
    fs.stderr_.push_back(0.0);
    fs.n_samples.push_back(1);
  }
  fs.config_json = cfg;
  io::write_curve_csv(dir + "/theory_entropy.csv", fs);

  manifest["files"] = {"theory_cq.csv", "theory_cl.csv", "theory_entropy.csv"};
  io::write_json(dir + "/theory_manifest.json", manifest);
  std::cout << "l0 = " << sc.l0 << ", l_c = " << sc.l_c << ", ell_max_c = " << sc.ell_max_c
            << "; tables in " << dir << '\n';
  return 0;
}

analysis::Curve curve_from_file(const io::CurveFile& f) {
  analysis::Curve c;
  c.x = f.x;
  c.y = f.mean;
  c.yerr = f.stderr_;
  return c;
}

int lattice_size_from_header(const io::CurveFile& f) {
  if (f.config_json.empty()) throw InvalidParameter("input file has no config header");
  return json::parse(f.config_json).at("L").get<int>();
}

int cmd_analyze(const std::string& task, const std::vector<std::string>& inputs,
                double window_lo, double window_hi, double c_value, const std::string& out) {
  json report;
  report["task"] = task;
  report["inputs"] = inputs;

  if (task == "powerfit") {
    const auto f = io::read_curve_csv(inputs.at(0));
    const auto fit = analysis::power_law_fit(curve_from_file(f), window_lo, window_hi);
    report["exponent"] = fit.exponent;
    report["exponent_err"] = fit.exponent_err;
    report["amplitude"] = fit.amplitude;
    report["n_points"] = fit.n_points;
  } else if (task == "crossover") {
    // inputs are c_l.csv files; |C| against the chord abscissa
    json per_file = json::array();
    std::vector<double> gammas, lcs;
    for (const auto& path : inputs) {
      const auto f = io::read_curve_csv(path);
      const int L = lattice_size_from_header(f);
      const json hdr = json::parse(f.config_json);
      analysis::Curve c;
      for (std::size_t i = 0; i < f.x.size(); ++i) {
        const double ell = f.x[i];
        if (ell < 1 || ell > L / 2) continue;
        c.x.push_back(obs::chord_length(ell, L));
        c.y.push_back(std::abs(f.mean[i]));
        c.yerr.push_back(f.stderr_[i]);
      }
      const double lo = window_lo > 0 ? window_lo : 1.0;
      const auto res = analysis::crossover_scale(c, lo);
      json entry{{"file", path},
                 {"found", res.found},
                 {"l_c", res.scale},
                 {"tangent_x", res.tangent_x}};
      if (hdr.contains("gamma")) entry["gamma"] = hdr["gamma"];
      per_file.push_back(entry);
      if (res.found && hdr.contains("gamma")) {
        gammas.push_back(hdr["gamma"].get<double>());
        lcs.push_back(res.scale);
      }
    }
    report["per_file"] = per_file;
    if (gammas.size() >= 3) {
      analysis::Curve scaling;
      std::vector<std::size_t> order(gammas.size());
      for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
      std::sort(order.begin(), order.end(),
                [&](auto a, auto b) { return gammas[a] < gammas[b]; });
      for (const auto i : order) {
        scaling.x.push_back(gammas[i]);
        scaling.y.push_back(lcs[i]);
      }
      const auto fit = analysis::power_law_fit(scaling, 0.0, 1e300);
      report["lc_gamma_exponent"] = fit.exponent;
      report["lc_gamma_exponent_err"] = fit.exponent_err;
    }
  } else if (task == "maximum") {
    const auto f = io::read_curve_csv(inputs.at(0));
    const auto res = analysis::locate_maximum(curve_from_file(f));
    report["interior"] = res.interior;
    report["x_max"] = res.x_max;
    report["y_max"] = res.y_max;
    report["x_err"] = res.x_err;
    report["y_err"] = res.y_err;
  } else if (task == "cft-collapse") {
    // inputs are cft_ell<F>.csv files: I2 - I3 against ell_B
    if (c_value <= 0) throw InvalidParameter("cft-collapse requires --c <central charge>");
    json per_file = json::array();
    double worst = 0.0;
    for (const auto& path : inputs) {
      const auto f = io::read_curve_csv(path);
      const int L = lattice_size_from_header(f);
      const std::string stem = std::filesystem::path(path).stem().string();
      const int ellf = std::stoi(stem.substr(stem.rfind("ell") + 3));
      std::vector<double> i2m(f.mean.size(), 0.0), x, probe;
      for (std::size_t i = 0; i < f.x.size(); ++i) {
        obs::SegmentLayout lay{ellf, static_cast<int>(f.x[i]), ellf, 0, L};
        x.push_back(obs::cross_ratio(lay));
        probe.push_back(obs::chord_length(f.x[i], L));
      }
      const auto res = obs::cft_collapse_check(f.mean, i2m, x, probe, c_value, window_lo,
                                               window_hi);
      json entry{{"file", path},
                 {"ell_fixed", ellf},
                 {"max_relative_in_window", res.max_relative_in_window},
                 {"n_in_window", res.n_in_window},
                 {"relative_residual", res.relative_residual}};
      per_file.push_back(entry);
      worst = std::max(worst, res.max_relative_in_window);
    }
    report["per_file"] = per_file;
    report["max_relative_in_window"] = worst;
  } else {
    throw InvalidParameter("unknown analyze task: " + task);
  }

  const std::string text = report.dump(2) + "\n";
  if (out.empty())
    std::cout << text;
  else
    io::atomic_write(out, text);
  return 0;
}

int cmd_oracle_check(int L, const std::string& model, int n_jumps, std::uint64_t seed,
                     double J, double gamma) {
  const auto rep = lockstep_compare(L, model_from_string(model), J, gamma, n_jumps, seed);
  std::cout << "L=" << L << " model=" << model << " jumps=" << rep.n_jumps
            << " max|dD|=" << rep.max_dd << " max|dw|=" << rep.max_weight_diff
            << " trace_drift=" << rep.trace_drift
            << " records_equal=" << (rep.records_equal ? "yes" : "no") << '\n';
  const bool pass = rep.records_equal && rep.max_dd < 1e-10;
  std::cout << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"monitored free fermions: trajectories, observables, theory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "run a trajectory ensemble from a JSON config");
  std::string config_path, out_override;
  int workers = 0;
  std::int64_t seed_override = -1;
  bool resume = false;
  sim->add_option("--config", config_path, "experiment config (JSON)")->required();
  sim->add_option("--workers", workers, "worker threads (default: config/hardware)");
  sim->add_option("--seed", seed_override, "override the config seed");
  sim->add_option("--out", out_override, "override the output directory");
  sim->add_flag("--resume", resume, "resume from an existing checkpoint");

  auto* th = app.add_subcommand("theory", "emit closed-form prediction tables");
  double J = 1.0, gamma = 1.0, filling = 0.5, beta = 0.5;
  std::string theory_dir = "theory_out";
  int nq = 200, nl = 200, nell = 60;
  th->add_option("--J", J, "hopping amplitude");
  th->add_option("--gamma", gamma, "jump rate")->required();
  th->add_option("--n", filling, "filling fraction");
  th->add_option("--beta", beta, "symmetry-class constant (1/2 or 1)");
  th->add_option("--out", theory_dir, "output directory");
  th->add_option("--nq", nq, "momentum grid points");
  th->add_option("--nl", nl, "distance grid points");
  th->add_option("--nell", nell, "subsystem-size grid points");

  auto* an = app.add_subcommand("analyze", "fits, crossovers, maxima, CFT collapse");
  std::string task, report_out;
  std::vector<std::string> inputs;
  double window_lo = 0.0, window_hi = 1e300, c_value = 0.0;
  an->add_option("task", task, "powerfit | crossover | maximum | cft-collapse")->required();
  an->add_option("inputs", inputs, "input curve files")->required();
  an->add_option("--window-lo", window_lo, "analysis window lower edge");
  an->add_option("--window-hi", window_hi, "analysis window upper edge");
  an->add_option("--c", c_value, "central charge for cft-collapse");
  an->add_option("--out", report_out, "write the JSON report here instead of stdout");

  auto* oc = app.add_subcommand("oracle-check", "Gaussian engine vs exact Fock oracle");
  int oc_L = 6, oc_jumps = 200;
  std::string oc_model = "fc";
  std::uint64_t oc_seed = 1;
  double oc_J = 1.0, oc_gamma = 1.0;
  oc->add_option("--L", oc_L, "lattice size (<= 10)");
  oc->add_option("--model", oc_model, "fc | om");
  oc->add_option("--jumps", oc_jumps, "number of jumps to compare");
  oc->add_option("--seed", oc_seed, "rng seed");
  oc->add_option("--J", oc_J, "hopping amplitude");
  oc->add_option("--gamma", oc_gamma, "jump rate");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed())
      return cmd_simulate(config_path, workers, seed_override, resume, out_override);
    if (th->parsed()) return cmd_theory(J, gamma, filling, beta, theory_dir, nq, nl, nell);
    if (an->parsed())
      return cmd_analyze(task, inputs, window_lo, window_hi, c_value, report_out);
    if (oc->parsed()) return cmd_oracle_check(oc_L, oc_model, oc_jumps, oc_seed, oc_J, oc_gamma);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
