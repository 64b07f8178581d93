#include "monfermi/ensemble.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <mutex>
#include <thread>

#include "monfermi/io.hpp"
#include "monfermi/temporal.hpp"
#include "monfermi/theory.hpp"
#include "monfermi/version.hpp"

namespace monfermi::ens {

using nlohmann::json;

void ExperimentConfig::validate() const {
  params.validate();
  if (n_ell < 2) throw InvalidParameter("config: n_ell must be >= 2");
  if (entropy_origins < 1) throw InvalidParameter("config: entropy_origins must be >= 1");
  if (observables.q_curve && params.model != ModelKind::FermionCounting)
    throw InvalidParameter("config: telegraph-reduced Q requires the fermion counting model");
  if (max_lag_fraction <= 0 || max_lag_fraction > 1)
    throw InvalidParameter("config: max_lag_fraction out of range");
}

json to_json(const ExperimentConfig& c) {
  json obs = json::array();
  if (c.observables.c_l) obs.push_back("c_l");
  if (c.observables.entropy) obs.push_back("entropy");
  if (c.observables.i2_i3) obs.push_back("i2_i3");
  if (c.observables.cft_scan) obs.push_back("cft_scan");
  if (c.observables.k_curve) obs.push_back("k");
  if (c.observables.q_curve) obs.push_back("q");
  return json{{"model", to_string(c.params.model)},
              {"L", c.params.L},
              {"J", c.params.J},
              {"gamma", c.params.gamma},
              {"seed", c.params.seed},
              {"t_burn", c.params.t_burn},
              {"t_sample", c.params.t_sample},
              {"dt_sample", c.params.dt_sample},
              {"n_traj", c.params.n_traj},
              {"init", c.params.init == InitialState::Neel ? "neel" : "random_classical"},
              {"observables", obs},
              {"n_ell", c.n_ell},
              {"entropy_origins", c.entropy_origins},
              {"cft_ell_fixed", c.cft_ell_fixed},
              {"max_lag_fraction", c.max_lag_fraction},
              {"workers", c.workers},
              {"checkpoint_every", c.checkpoint_every},
              {"output_dir", c.output_dir}};
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  c.params.model = model_from_string(j.at("model").get<std::string>());
  c.params.L = j.at("L").get<int>();
  c.params.J = j.value("J", 1.0);
  c.params.gamma = j.at("gamma").get<double>();
  c.params.seed = j.value("seed", std::uint64_t{0});
  c.params.t_burn = j.value("t_burn", 0.0);
  c.params.t_sample = j.value("t_sample", 0.0);
  c.params.dt_sample = j.value("dt_sample", 1.0);
  c.params.n_traj = j.value("n_traj", 1);
  const std::string init = j.value("init", "neel");
  if (init == "neel")
    c.params.init = InitialState::Neel;
  else if (init == "random_classical")
    c.params.init = InitialState::RandomClassical;
  else
    throw InvalidParameter("config: unknown init " + init);
  if (j.contains("observables"))
    for (const auto& o : j.at("observables")) {
      const std::string s = o.get<std::string>();
      if (s == "c_l")
        c.observables.c_l = true;
      else if (s == "entropy")
        c.observables.entropy = true;
      else if (s == "i2_i3")
        c.observables.i2_i3 = true;
      else if (s == "cft_scan")
        c.observables.cft_scan = true;
      else if (s == "k")
        c.observables.k_curve = true;
      else if (s == "q")
        c.observables.q_curve = true;
      else
        throw InvalidParameter("config: unknown observable " + s);
    }
  c.n_ell = j.value("n_ell", 66);
  c.entropy_origins = j.value("entropy_origins", 2);
  if (j.contains("cft_ell_fixed")) c.cft_ell_fixed = j.at("cft_ell_fixed").get<std::vector<int>>();
  c.max_lag_fraction = j.value("max_lag_fraction", 0.25);
  c.workers = j.value("workers", 0);
  c.checkpoint_every = j.value("checkpoint_every", 0);
  c.output_dir = j.value("output_dir", std::string{});
  c.validate();
  return c;
}

std::string ExperimentConfig::canonical_json() const {
  json j = to_json(*this);
  j.erase("workers");  // scheduling must not affect results or identity
  j.erase("checkpoint_every");
  j.erase("output_dir");
  return j.dump();
}

namespace {

struct Grids {
  std::vector<int> ell_grid;
  std::vector<int> origins;

  std::vector<int> i2_ell;
  std::vector<int> i2_ellb;
  std::vector<double> i2_x;

  std::vector<std::vector<int>> cft_ellp;  // per fixed ell
};

Grids make_grids(const ExperimentConfig& c) {
  Grids g;
  const int L = c.params.L;
  g.ell_grid = obs::build_ell_grid(L, c.n_ell);
  for (int i = 0; i < c.entropy_origins; ++i)
    g.origins.push_back(static_cast<int>(static_cast<long>(i) * L / c.entropy_origins));

  if (c.observables.i2_i3) {
    for (const int ell : g.ell_grid) {
      if (ell > L / 8) break;
      // ell_B ~ 3 ell, tuned to pin the cross ratio near 1/16
      int best = -1;
      double best_dev = 1e18;
      for (int ellb = std::max(1, 2 * ell); ellb <= std::min(4 * ell, L - 2 * ell - 1); ++ellb) {
        obs::SegmentLayout lay{ell, ellb, ell, 0, L};
        const double dev = std::abs(obs::cross_ratio(lay) - 1.0 / 16.0);
        if (dev < best_dev) {
          best_dev = dev;
          best = ellb;
        }
      }
      if (best < 0) continue;
      obs::SegmentLayout lay{ell, best, ell, 0, L};
      g.i2_ell.push_back(ell);
      g.i2_ellb.push_back(best);
      g.i2_x.push_back(obs::cross_ratio(lay));
    }
  }

  if (c.observables.cft_scan) {
    for (const int ellf : c.cft_ell_fixed) {
      std::vector<int> ellp;
      const int cap = L - 2 * ellf - 1;
      for (const int e : obs::build_ell_grid(L, 30))
        if (e <= cap) ellp.push_back(e);
      g.cft_ellp.push_back(std::move(ellp));
    }
  }
  return g;
}

struct SnapshotAccumulator {
  const ExperimentConfig& cfg;
  const Grids& grids;
  long n_snap = 0;

  Eigen::VectorXd c_l;
  Eigen::VectorXd s_ell, cum2;
  Eigen::VectorXd i2, i3;
  std::vector<Eigen::VectorXd> cft;

  SnapshotAccumulator(const ExperimentConfig& c, const Grids& g) : cfg(c), grids(g) {
    const int L = c.params.L;
    if (c.observables.c_l) c_l = Eigen::VectorXd::Zero(L / 2 + 1);
    if (c.observables.entropy) {
      s_ell = Eigen::VectorXd::Zero(grids.ell_grid.size());
      cum2 = Eigen::VectorXd::Zero(grids.ell_grid.size());
    }
    if (c.observables.i2_i3) {
      i2 = Eigen::VectorXd::Zero(grids.i2_ell.size());
      i3 = Eigen::VectorXd::Zero(grids.i2_ell.size());
    }
    if (c.observables.cft_scan)
      for (const auto& ellp : grids.cft_ellp) cft.push_back(Eigen::VectorXd::Zero(ellp.size()));
  }

  void add(const GaussianState& snap) {
    const int L = cfg.params.L;
    const Matrix& d = snap.d;
    ++n_snap;
    if (cfg.observables.c_l) c_l += obs::correlation_profile(d);

    const double w = 1.0 / grids.origins.size();
    for (const int o : grids.origins) {
      if (cfg.observables.entropy) {
        for (std::size_t i = 0; i < grids.ell_grid.size(); ++i) {
          std::vector<int> seg(grids.ell_grid[i]);
          for (int k = 0; k < grids.ell_grid[i]; ++k) seg[k] = (o + k) % L;
          s_ell(i) += w * obs::subsystem_entropy(d, seg);
          cum2(i) += w * obs::second_cumulant(d, seg);
        }
      }
      if (cfg.observables.i2_i3) {
        for (std::size_t i = 0; i < grids.i2_ell.size(); ++i) {
          obs::SegmentLayout lay{grids.i2_ell[i], grids.i2_ellb[i], grids.i2_ell[i], o, L};
          i2(i) += w * obs::mutual_information_i2(d, lay);
          i3(i) += w * obs::tripartite_i3(d, lay);
        }
      }
      if (cfg.observables.cft_scan) {
        for (std::size_t f = 0; f < grids.cft_ellp.size(); ++f) {
          const int ellf = cfg.cft_ell_fixed[f];
          for (std::size_t p = 0; p < grids.cft_ellp[f].size(); ++p) {
            const int ellb = grids.cft_ellp[f][p];
            obs::SegmentLayout lay{ellf, ellb, ellf, o, L};
            // I2 - I3 = S_AB + S_BC - S_B - S_ABC: contiguous segments only
            const double d23 = obs::subsystem_entropy(d, lay.sites_ab()) +
                               obs::subsystem_entropy(d, lay.sites_bc()) -
                               obs::subsystem_entropy(d, lay.sites_b()) -
                               obs::subsystem_entropy(d, lay.sites_abc());
            cft[f](p) += w * d23;
          }
        }
      }
    }
  }
};

TrajectoryResult run_one(const ExperimentConfig& cfg, const Grids& grids,
                         const FourierWorkspace& ws, int traj_index) {
  SnapshotAccumulator acc(cfg, grids);
  const SampleGrid grid = grid_from_params(cfg.params);
  RunOptions opts;
  opts.invariant_check_every = std::max<long>(100, cfg.params.L);
  const bool want_snapshots = cfg.observables.c_l || cfg.observables.entropy ||
                              cfg.observables.i2_i3 || cfg.observables.cft_scan;
  if (want_snapshots)
    opts.on_snapshot = [&acc](int, double, const GaussianState& s) { acc.add(s); };

  const SampledTrajectory traj =
      run_trajectory(cfg.params, grid, ws, static_cast<std::uint64_t>(traj_index), opts);

  TrajectoryResult res;
  const double inv = acc.n_snap > 0 ? 1.0 / acc.n_snap : 0.0;
  if (cfg.observables.c_l) res.c_l = acc.c_l * inv;
  if (cfg.observables.entropy) {
    res.s_ell = acc.s_ell * inv;
    res.cumulant2 = acc.cum2 * inv;
  }
  if (cfg.observables.i2_i3) {
    res.i2 = acc.i2 * inv;
    res.i3 = acc.i3 * inv;
  }
  if (cfg.observables.cft_scan)
    for (auto& v : acc.cft) res.cft_d23.push_back(v * inv);

  if (cfg.observables.k_curve || cfg.observables.q_curve) {
    const int n_lags = std::max(
        2, std::min(grid.n, static_cast<int>(grid.n * cfg.max_lag_fraction) + 1));
    if (cfg.observables.k_curve) res.raw_k = temporal::raw_autocorrelation(traj.z, n_lags);
    if (cfg.observables.q_curve)
      res.raw_q = temporal::raw_telegraph(traj.z, traj.jump_counts, n_lags);
    res.zbar = traj.z.mean();
  }
  return res;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Eigen::VectorXd vec_from_json(const json& a) {
  Eigen::VectorXd v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v(i) = a[i].get<double>();
  return v;
}

json result_to_json(const TrajectoryResult& r) {
  json j;
  j["c_l"] = vec_to_json(r.c_l);
  j["s_ell"] = vec_to_json(r.s_ell);
  j["cumulant2"] = vec_to_json(r.cumulant2);
  j["i2"] = vec_to_json(r.i2);
  j["i3"] = vec_to_json(r.i3);
  json cft = json::array();
  for (const auto& v : r.cft_d23) cft.push_back(vec_to_json(v));
  j["cft_d23"] = cft;
  j["raw_k"] = vec_to_json(r.raw_k);
  j["raw_q"] = vec_to_json(r.raw_q);
  j["zbar"] = r.zbar;
  return j;
}

TrajectoryResult result_from_json(const json& j) {
  TrajectoryResult r;
  r.c_l = vec_from_json(j.at("c_l"));
  r.s_ell = vec_from_json(j.at("s_ell"));
  r.cumulant2 = vec_from_json(j.at("cumulant2"));
  r.i2 = vec_from_json(j.at("i2"));
  r.i3 = vec_from_json(j.at("i3"));
  for (const auto& v : j.at("cft_d23")) r.cft_d23.push_back(vec_from_json(v));
  r.raw_k = vec_from_json(j.at("raw_k"));
  r.raw_q = vec_from_json(j.at("raw_q"));
  r.zbar = j.at("zbar").get<double>();
  return r;
}

CurveResult reduce_curves(const std::vector<TrajectoryResult>& results,
                          const std::function<Eigen::VectorXd(const TrajectoryResult&)>& pick,
                          const std::vector<double>& x, double subtract = 0.0) {
  obs::TrajectoryAccumulator acc(static_cast<int>(x.size()));
  for (const auto& r : results) {
    const Eigen::VectorXd v = pick(r);
    if (v.size() != static_cast<long>(x.size()))
      throw InternalInconsistency("ensemble reduce: curve size mismatch");
    acc.add(v);
  }
  CurveResult c;
  c.x = x;
  c.n_traj = acc.count();
  const Eigen::VectorXd m = acc.means();
  const Eigen::VectorXd se = acc.stderrs();
  for (int i = 0; i < m.size(); ++i) {
    c.mean.push_back(m(i) - subtract);
    c.stderr_.push_back(se(i));
  }
  return c;
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentConfig& config,
                            std::function<void(int, int)> progress) {
  config.validate();
  const Grids grids = make_grids(config);
  const int n_traj = config.params.n_traj;
  const std::string cfg_hash = io::fnv1a_hex(config.canonical_json());

  std::vector<std::optional<TrajectoryResult>> slots(n_traj);

  const std::string ckpt_path =
      config.output_dir.empty() ? "" : config.output_dir + "/checkpoint.json";
  if (!ckpt_path.empty() && std::filesystem::exists(ckpt_path)) {
    const json ck = io::read_json(ckpt_path);
    if (ck.value("config_hash", "") == cfg_hash) {
      for (const auto& [key, val] : ck.at("results").items()) {
        const int idx = std::stoi(key);
        if (idx >= 0 && idx < n_traj) slots[idx] = result_from_json(val);
      }
    }
  }

  std::vector<char> ready(n_traj, 0);
  for (int i = 0; i < n_traj; ++i) ready[i] = slots[i].has_value();

  std::atomic<int> next{0};
  std::atomic<int> done{0};
  std::mutex ckpt_mutex;  // guards `ready` and checkpoint writes
  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto checkpoint = [&]() {
    if (ckpt_path.empty() || config.checkpoint_every <= 0) return;
    std::lock_guard<std::mutex> lock(ckpt_mutex);
    json results = json::object();
    for (int i = 0; i < n_traj; ++i)
      if (ready[i] && slots[i]) results[std::to_string(i)] = result_to_json(*slots[i]);
    json ck{{"config_hash", cfg_hash}, {"results", results}};
    std::filesystem::create_directories(config.output_dir);
    io::atomic_write(ckpt_path, ck.dump());
  };

  const auto worker = [&]() {
    try {
      FourierWorkspace ws(config.params.L, config.params.J);
      while (true) {
        const int i = next.fetch_add(1);
        if (i >= n_traj) break;
        bool skip;
        {
          std::lock_guard<std::mutex> lock(ckpt_mutex);
          skip = ready[i];
        }
        if (skip) {
          done.fetch_add(1);
          continue;
        }
        auto res = run_one(config, grids, ws, i);
        {
          std::lock_guard<std::mutex> lock(ckpt_mutex);
          slots[i] = std::move(res);
          ready[i] = 1;
        }
        const int d = done.fetch_add(1) + 1;
        if (progress) progress(d, n_traj);
        if (config.checkpoint_every > 0 && d % config.checkpoint_every == 0) checkpoint();
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };

  int n_workers = config.workers > 0
                      ? config.workers
                      : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::max(1, std::min(n_workers, n_traj));
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first_error) std::rethrow_exception(first_error);
  checkpoint();

  std::vector<TrajectoryResult> results;
  results.reserve(n_traj);
  for (int i = 0; i < n_traj; ++i) {
    if (!slots[i]) throw InternalInconsistency("ensemble: missing trajectory result");
    results.push_back(std::move(*slots[i]));
  }

  EnsembleResult out;
  out.config = config;
  out.ell_grid = grids.ell_grid;
  out.i2_ell = grids.i2_ell;
  out.i2_x = grids.i2_x;
  out.cft_ellp = grids.cft_ellp;
  out.n_traj = n_traj;
  const int L = config.params.L;

  if (config.observables.c_l) {
    std::vector<double> x(L / 2 + 1);
    for (int l = 0; l <= L / 2; ++l) x[l] = l;
    out.curves["c_l"] = reduce_curves(results, [](const auto& r) { return r.c_l; }, x);
  }
  if (config.observables.entropy) {
    std::vector<double> x(grids.ell_grid.begin(), grids.ell_grid.end());
    out.curves["s_ell"] =
        reduce_curves(results, [](const auto& r) { return r.s_ell; }, x);
    out.curves["cumulant2"] =
        reduce_curves(results, [](const auto& r) { return r.cumulant2; }, x);

    // effective central charge per trajectory, then trajectory statistics
    std::vector<double> xc;
    for (std::size_t i = 0; i + 1 < grids.ell_grid.size(); ++i)
      xc.push_back(std::sqrt(obs::chord_length(grids.ell_grid[i], L) *
                             obs::chord_length(grids.ell_grid[i + 1], L)));
    const auto c_of = [&](const TrajectoryResult& r) {
      std::vector<double> s(r.s_ell.data(), r.s_ell.data() + r.s_ell.size());
      const auto pts = obs::effective_central_charge(s, grids.ell_grid, L);
      Eigen::VectorXd v(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) v(i) = pts[i].c;
      return v;
    };
    out.curves["c_ell"] = reduce_curves(results, c_of, xc);
  }
  if (config.observables.i2_i3) {
    std::vector<double> x(grids.i2_ell.begin(), grids.i2_ell.end());
    out.curves["i2"] = reduce_curves(results, [](const auto& r) { return r.i2; }, x);
    out.curves["i3"] = reduce_curves(results, [](const auto& r) { return r.i3; }, x);
  }
  if (config.observables.cft_scan) {
    for (std::size_t f = 0; f < grids.cft_ellp.size(); ++f) {
      std::vector<double> x(grids.cft_ellp[f].begin(), grids.cft_ellp[f].end());
      out.curves["cft_ell" + std::to_string(config.cft_ell_fixed[f])] = reduce_curves(
          results, [f](const auto& r) { return r.cft_d23.at(f); }, x);
    }
  }
  if (config.observables.k_curve || config.observables.q_curve) {
    const SampleGrid grid = grid_from_params(config.params);
    const int n_lags = std::max(
        2, std::min(grid.n, static_cast<int>(grid.n * config.max_lag_fraction) + 1));
    std::vector<double> lags(n_lags);
    for (int k = 0; k < n_lags; ++k) lags[k] = k * config.params.dt_sample;
    if (config.observables.k_curve) {
      double zbar = 0.0;
      for (const auto& r : results) zbar += r.zbar;
      zbar /= results.size();
      out.curves["k"] = reduce_curves(
          results, [](const auto& r) { return r.raw_k; }, lags, zbar * zbar);
    }
    if (config.observables.q_curve)
      out.curves["q"] = reduce_curves(results, [](const auto& r) { return r.raw_q; }, lags);
  }
  return out;
}

std::vector<std::string> write_result_files(const EnsembleResult& result,
                                            const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string cfg = result.config.canonical_json();
  std::vector<std::string> files;
  json manifest;
  manifest["version"] = kVersion;
  manifest["config"] = to_json(result.config);
  manifest["config_hash"] = io::fnv1a_hex(cfg);
  manifest["n_traj"] = result.n_traj;
  manifest["ell_grid"] = result.ell_grid;
  manifest["i2_ell"] = result.i2_ell;
  manifest["i2_x"] = result.i2_x;
  manifest["cft_ellp"] = result.cft_ellp;
  if (std::abs(result.config.params.J) > 0) {
    theory::TheoryParams tp{0.5, result.config.params.J, result.config.params.gamma, 0.5};
    const auto sc = theory::scales(tp);
    manifest["scales"] = json{{"l0", sc.l0},   {"tau0", sc.tau0},       {"nu", sc.nu},
                              {"g0", sc.g0},   {"v0", sc.v0},           {"l_star", sc.l_star},
                              {"q_c", sc.q_c}, {"l_c", sc.l_c},         {"ell_max_c", sc.ell_max_c}};
  }
  json file_list = json::array();
  for (const auto& [name, curve] : result.curves) {
    io::CurveFile cf;
    cf.name = name;
    cf.x = curve.x;
    cf.mean = curve.mean;
    cf.stderr_ = curve.stderr_;
    cf.n_samples.assign(curve.x.size(), curve.n_traj);
    cf.config_json = cfg;
    const std::string fname = name + ".csv";
    io::write_curve_csv(dir + "/" + fname, cf);
    file_list.push_back(fname);
    files.push_back(fname);
  }
  manifest["files"] = file_list;
  io::write_json(dir + "/manifest.json", manifest);
  files.push_back("manifest.json");
  return files;
}

}  // namespace monfermi::ens
