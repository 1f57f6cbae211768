#include "urtu/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "urtu/errors.hpp"
#include "urtu/rng.hpp"
#include "urtu/version.hpp"

namespace urtu {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::both_zero:
      return "BothZero";
    case Outcome::rumor_persists:
      return "RumorPersists";
    case Outcome::truth_persists:
      return "TruthPersists";
    default:
      return "BothPersist";
  }
}

Outcome classify_outcome(const Trajectory& traj, double eps, double window) {
  if (traj.points() < 2)
    throw DomainError("classify_outcome: insufficient-horizon (empty span)");
  const double t_end = traj.times(traj.points() - 1);
  const double span = t_end - traj.times(0);
  const double w = window > 0.0 ? window : 0.2 * span;
  if (w > span)
    throw DomainError("classify_outcome: insufficient-horizon (window " +
                      std::to_string(w) + " > span " + std::to_string(span) +
                      ")");
  const double start = t_end - w;
  bool r_zero = true, t_zero = true;
  for (Index g = 0; g < traj.points(); ++g) {
    if (traj.times(g) < start) continue;
    r_zero = r_zero && traj.agg_r(g) < eps;
    t_zero = t_zero && traj.agg_t(g) < eps;
  }
  if (r_zero) return t_zero ? Outcome::both_zero : Outcome::truth_persists;
  return t_zero ? Outcome::rumor_persists : Outcome::both_persist;
}

Trajectory integrate_settled(const ProbabilityState& s0, const UrtuParams& p,
                             const RateFamily& fam, double t_end, double cap,
                             Index grid_points, double eps,
                             const IntegratorOptions& opts) {
  double horizon = t_end;
  while (true) {
    Trajectory traj = integrate(s0, p, fam, linspace(0.0, horizon, grid_points), opts);
    const double start = horizon - 0.2 * horizon;
    double max_slope = 0.0;
    for (Index g = 1; g < traj.points(); ++g) {
      if (traj.times(g - 1) < start) continue;
      const double dt = traj.times(g) - traj.times(g - 1);
      const double ds = (traj.agg_r(g) + traj.agg_t(g)) -
                        (traj.agg_r(g - 1) + traj.agg_t(g - 1));
      max_slope = std::max(max_slope, std::abs(ds / dt));
    }
    if (max_slope <= eps / 10.0 || 2.0 * horizon > cap) return traj;
    horizon *= 2.0;
  }
}

nlohmann::json to_json(const RunRecord& rec, bool include_timings) {
  nlohmann::json j{
      {"run", rec.run_index},
      {"run_seed", rec.run_seed},
      {"params_seed", rec.params_seed},
      {"init_seed", rec.init_seed},
      {"sim_seed", rec.sim_seed},
      {"spectral", to_json(rec.spectral)},
      {"outcome_ode", to_string(rec.outcome_ode)},
      {"outcome_ensemble", to_string(rec.outcome_ensemble)},
      {"max_dev_R", rec.max_dev_r},
      {"mean_dev_R", rec.mean_dev_r},
      {"max_dev_T", rec.max_dev_t},
      {"mean_dev_T", rec.mean_dev_t},
      {"ode_horizon", rec.ode_horizon},
      {"ode_final_R", rec.ode_final_r},
      {"ode_final_T", rec.ode_final_t},
  };
  if (!rec.error.empty()) j["error"] = rec.error;
  if (include_timings) {
    j["ensemble_seconds"] = rec.ensemble_seconds;
    j["ode_seconds"] = rec.ode_seconds;
  }
  return j;
}

RunRecord compare_models(const UrtuParams& p, const RateFamily& fam,
                         std::uint64_t run_seed, const CompareOptions& opts) {
  using clock = std::chrono::steady_clock;
  RunRecord rec;
  rec.run_seed = run_seed;
  rec.init_seed = derive_seed(run_seed, 1);
  rec.sim_seed = derive_seed(run_seed, 2);

  const OsnState init = initial_state_random(p.node_count(), rec.init_seed);
  const Vector grid = linspace(0.0, opts.t_end, opts.grid_points);

  const auto te0 = clock::now();
  const Trajectory ens =
      ensemble_average(p, fam, InitPolicy::fixed_state(init), grid,
                       opts.paths, rec.sim_seed, opts.ensemble_threads);
  rec.ensemble_seconds = std::chrono::duration<double>(clock::now() - te0).count();

  const ProbabilityState s0 = indicator_state(init);
  const auto to0 = clock::now();
  const Trajectory ode = integrate(s0, p, fam, grid);
  const Trajectory settled = integrate_settled(
      s0, p, fam, opts.t_end_ode, opts.horizon_cap, opts.grid_points, opts.eps);
  rec.ode_seconds = std::chrono::duration<double>(clock::now() - to0).count();

  double sum_r = 0.0, sum_t = 0.0;
  for (Index g = 0; g < grid.size(); ++g) {
    const double dev_r = std::abs(ode.agg_r(g) - ens.agg_r(g));
    const double dev_t = std::abs(ode.agg_t(g) - ens.agg_t(g));
    rec.max_dev_r = std::max(rec.max_dev_r, dev_r);
    rec.max_dev_t = std::max(rec.max_dev_t, dev_t);
    sum_r += dev_r;
    sum_t += dev_t;
  }
  rec.mean_dev_r = sum_r / static_cast<double>(grid.size());
  rec.mean_dev_t = sum_t / static_cast<double>(grid.size());

  rec.spectral = spectral_report(fam);
  rec.outcome_ensemble = classify_outcome(ens, opts.eps, opts.window);
  rec.outcome_ode = classify_outcome(settled, opts.eps, opts.window);
  rec.ode_horizon = settled.times(settled.points() - 1);
  rec.ode_final_r = settled.agg_r(settled.points() - 1);
  rec.ode_final_t = settled.agg_t(settled.points() - 1);

  if (!opts.plot_path.empty()) emit_plot_data(ode, ens, opts.plot_path);
  return rec;
}

SweepConfig sweep_config_from_json(const nlohmann::json& j) {
  SweepConfig cfg;
  const auto& net = j.at("network");
  cfg.kind = net.at("kind").get<std::string>();
  if (cfg.kind == "file") {
    cfg.edges_path = net.at("path").get<std::string>();
    cfg.edges_path_gt = net.value("path_gt", std::string{});
  } else if (cfg.kind == "scale-free") {
    cfg.n = net.at("n").get<Index>();
    cfg.ba_m = net.value("m", Index{3});
  } else if (cfg.kind == "small-world") {
    cfg.n = net.at("n").get<Index>();
    cfg.ws_k = net.value("k", Index{4});
    cfg.ws_p = net.value("p", 0.1);
  } else {
    throw ValidationError("sweep config: unknown network kind " + cfg.kind);
  }
  cfg.count = j.at("count").get<int>();
  if (cfg.count < 1) throw ValidationError("sweep config: count must be >= 1");
  if (j.contains("sampling")) {
    const auto& s = j.at("sampling");
    auto range = [&](const char* key, double& lo, double& hi) {
      if (!s.contains(key)) return;
      lo = s.at(key).at(0).get<double>();
      hi = s.at(key).at(1).get<double>();
    };
    range("beta", cfg.ranges.beta_lo, cfg.ranges.beta_hi);
    range("gamma", cfg.ranges.gamma_lo, cfg.ranges.gamma_hi);
    range("delta", cfg.ranges.delta_lo, cfg.ranges.delta_hi);
    cfg.ranges.homogeneous = s.value("homogeneous", true);
  }
  if (j.contains("family")) {
    cfg.family = rate_kind_from_string(j.at("family").at("kind"));
    cfg.saturation = j.at("family").value("c", 0.0);
  }
  cfg.run.paths = j.value("paths", 10000);
  cfg.run.t_end = j.value("t_end", 30.0);
  cfg.run.t_end_ode = j.value("t_end_ode", 200.0);
  cfg.run.horizon_cap = j.value("horizon_cap", 1600.0);
  cfg.run.grid_points = j.value("grid_points", Index{121});
  cfg.run.eps = j.value("epsilon", 1e-3);
  const double wf = j.value("window_fraction", 0.2);
  cfg.run.window = wf == 0.2 ? 0.0 : wf * cfg.run.t_end;
  cfg.master_seed = j.value("master_seed", std::uint64_t{0});
  cfg.threads = j.value("threads", 0);
  return cfg;
}

nlohmann::json sweep_config_to_json(const SweepConfig& cfg) {
  nlohmann::json net;
  net["kind"] = cfg.kind;
  if (cfg.kind == "file") {
    net["path"] = cfg.edges_path;
    if (!cfg.edges_path_gt.empty()) net["path_gt"] = cfg.edges_path_gt;
  } else if (cfg.kind == "scale-free") {
    net["n"] = cfg.n;
    net["m"] = cfg.ba_m;
  } else {
    net["n"] = cfg.n;
    net["k"] = cfg.ws_k;
    net["p"] = cfg.ws_p;
  }
  nlohmann::json fam{{"kind", to_string(cfg.family)}};
  if (cfg.family == RateKind::saturating) fam["c"] = cfg.saturation;
  // threads is an execution detail: echoing it would break byte-identical
  // reruns across machines, so it stays out of the config echo
  return nlohmann::json{
      {"network", net},
      {"count", cfg.count},
      {"sampling",
       {{"beta", {cfg.ranges.beta_lo, cfg.ranges.beta_hi}},
        {"gamma", {cfg.ranges.gamma_lo, cfg.ranges.gamma_hi}},
        {"delta", {cfg.ranges.delta_lo, cfg.ranges.delta_hi}},
        {"homogeneous", cfg.ranges.homogeneous}}},
      {"family", fam},
      {"paths", cfg.run.paths},
      {"t_end", cfg.run.t_end},
      {"t_end_ode", cfg.run.t_end_ode},
      {"horizon_cap", cfg.run.horizon_cap},
      {"grid_points", cfg.run.grid_points},
      {"epsilon", cfg.run.eps},
      {"window_fraction",
       cfg.run.window <= 0.0 ? 0.2 : cfg.run.window / cfg.run.t_end},
      {"master_seed", cfg.master_seed}};
}

SweepConfig load_sweep_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open sweep config: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
  try {
    return sweep_config_from_json(j);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_csv_row(std::ostream& out, const RunRecord& r) {
  out << r.run_index << "," << r.params_seed << "," << r.init_seed << ","
      << r.sim_seed << ",";
  if (r.failed()) {
    out << ",,,,,,,,,,,,,,\"" << r.error << "\"\n";
    return;
  }
  out << fmt(r.spectral.s1) << "," << fmt(r.spectral.s2) << ","
      << to_string(r.spectral.regime) << "," << r.spectral.criteria[0] << ","
      << r.spectral.criteria[1] << "," << r.spectral.criteria[2] << ","
      << r.spectral.criteria[3] << "," << to_string(r.outcome_ode) << ","
      << to_string(r.outcome_ensemble) << "," << fmt(r.max_dev_r) << ","
      << fmt(r.mean_dev_r) << "," << fmt(r.max_dev_t) << ","
      << fmt(r.mean_dev_t) << "," << fmt(r.ode_horizon) << ",\n";
}

}  // namespace

SweepResult sweep(const SweepConfig& cfg, std::ostream& csv) {
  DirectedNetwork gr;
  if (cfg.kind == "file") {
    gr = load_edges(cfg.edges_path);
  } else if (cfg.kind == "scale-free") {
    gr = generate_scale_free(cfg.n, cfg.ba_m, derive_seed(cfg.master_seed, 0));
  } else {
    gr = generate_small_world(cfg.n, cfg.ws_k, cfg.ws_p,
                              derive_seed(cfg.master_seed, 0));
  }
  const DirectedNetwork gt =
      cfg.edges_path_gt.empty() ? gr : load_edges(cfg.edges_path_gt);
  if (!is_strongly_connected(gr) || !is_strongly_connected(gt))
    throw ValidationError("sweep: network is not strongly connected");

  const int count = cfg.count;
  std::vector<RunRecord> records(count);
  std::vector<char> done(count, 0);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<int> next{0};

  auto run_one = [&](int k) {
    RunRecord rec;
    rec.run_index = k;
    const std::uint64_t run_seed = derive_seed(cfg.master_seed, 100 + k);
    rec.run_seed = run_seed;
    rec.params_seed = derive_seed(run_seed, 0);
    try {
      const UrtuParams params =
          sample_random(gr, gt, cfg.ranges, rec.params_seed);
      const RateFamily fam = cfg.family == RateKind::linear
                                 ? linear_family(params)
                                 : saturating_family(params, cfg.saturation);
      CompareOptions run_opts = cfg.run;
      if (!cfg.plot_dir.empty()) {
        char name[64];
        std::snprintf(name, sizeof(name), "/run_%04d.dat", k);
        run_opts.plot_path = cfg.plot_dir + name;
      }
      RunRecord full = compare_models(params, fam, run_seed, run_opts);
      full.run_index = k;
      full.params_seed = rec.params_seed;
      rec = full;
    } catch (const std::exception& e) {
      rec.error = e.what();
    }
    {
      std::lock_guard<std::mutex> lock(mu);
      records[k] = std::move(rec);
      done[k] = 1;
    }
    cv.notify_all();
  };

  int workers = cfg.threads > 0
                    ? cfg.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, count);

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      while (true) {
        const int k = next.fetch_add(1);
        if (k >= count) break;
        run_one(k);
      }
    });

  csv << "# " << kToolVersion << "\n";
  csv << "# master_seed=" << cfg.master_seed << "\n";
  csv << "# config=" << sweep_config_to_json(cfg).dump() << "\n";
  csv << "run,params_seed,init_seed,sim_seed,s1,s2,regime,crit_a,crit_b,"
         "crit_c,crit_d,outcome_ode,outcome_ensemble,max_dev_R,mean_dev_R,"
         "max_dev_T,mean_dev_T,ode_horizon,error\n";
  {
    std::unique_lock<std::mutex> lock(mu);
    for (int k = 0; k < count; ++k) {
      cv.wait(lock, [&] { return done[k] == 1; });
      write_csv_row(csv, records[k]);
      csv.flush();
    }
  }
  for (auto& th : pool) th.join();

  // Collections keyed on the ensemble outcome (the observed process).
  SweepResult result;
  result.records = std::move(records);
  nlohmann::json collections;
  for (Outcome o : {Outcome::both_zero, Outcome::rumor_persists,
                    Outcome::truth_persists, Outcome::both_persist}) {
    int cnt = 0;
    double max_r = 0.0, max_t = 0.0, sum_r = 0.0, sum_t = 0.0;
    for (const auto& r : result.records) {
      if (r.failed() || r.outcome_ensemble != o) continue;
      ++cnt;
      max_r = std::max(max_r, r.max_dev_r);
      max_t = std::max(max_t, r.max_dev_t);
      sum_r += r.max_dev_r;
      sum_t += r.max_dev_t;
    }
    collections[to_string(o)] = {
        {"count", cnt},
        {"max_dev_R", max_r},
        {"max_dev_T", max_t},
        {"mean_max_dev_R", cnt ? sum_r / cnt : 0.0},
        {"mean_max_dev_T", cnt ? sum_t / cnt : 0.0}};
  }
  int failures = 0;
  for (const auto& r : result.records)
    if (r.failed()) ++failures;
  result.summary = nlohmann::json{
      {"tool_version", kToolVersion},
      {"master_seed", cfg.master_seed},
      {"config", sweep_config_to_json(cfg)},
      {"rule",
       {{"epsilon", cfg.run.eps},
        {"window_fraction",
         cfg.run.window <= 0.0 ? 0.2 : cfg.run.window / cfg.run.t_end}}},
      {"runs", count},
      {"failures", failures},
      {"collections", collections}};
  return result;
}

void emit_plot_data(const Trajectory& ode, const Trajectory& ensemble,
                    const std::string& path) {
  if (ode.points() != ensemble.points())
    throw ValidationError("emit_plot_data: grid size mismatch");
  std::ofstream out(path);
  if (!out) throw Error("cannot write plot data: " + path);
  for (Index g = 0; g < ode.points(); ++g) {
    if (ode.times(g) != ensemble.times(g))
      throw ValidationError("emit_plot_data: grids differ");
    out << fmt(ode.times(g)) << " " << fmt(ode.agg_r(g)) << " "
        << fmt(ode.agg_t(g)) << " " << fmt(ensemble.agg_r(g)) << " "
        << fmt(ensemble.agg_t(g)) << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

}  // namespace urtu
