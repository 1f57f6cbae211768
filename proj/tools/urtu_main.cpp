// Command-line front end: generate networks, sample parameters, run the
// spectral analysis, simulate either model, compare them, or sweep.
// Machine-readable results go to stdout; diagnostics to stderr.
// Exit codes: 0 success, 1 validation/input error, 2 numeric error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "urtu/analysis.hpp"
#include "urtu/errors.hpp"
#include "urtu/graph.hpp"
#include "urtu/harness.hpp"
#include "urtu/meanfield.hpp"
#include "urtu/params.hpp"
#include "urtu/rng.hpp"
#include "urtu/stochastic.hpp"
#include "urtu/trajectory.hpp"
#include "urtu/version.hpp"

namespace {

using nlohmann::json;
using namespace urtu;

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

struct NetworkArgs {
  std::string gr_path;
  std::string gt_path;  // empty: reuse gr

  void attach(CLI::App* cmd) {
    cmd->add_option("--gr", gr_path, "rumor-graph edge-list file")->required();
    cmd->add_option("--gt", gt_path,
                    "truth-graph edge-list file (default: same as --gr)");
  }

  std::pair<DirectedNetwork, DirectedNetwork> load() const {
    DirectedNetwork gr = load_edges(gr_path);
    DirectedNetwork gt = gt_path.empty() ? gr : load_edges(gt_path);
    return {std::move(gr), std::move(gt)};
  }
};

void require_valid(const UrtuParams& p, const DirectedNetwork& gr,
                   const DirectedNetwork& gt) {
  const ValidationReport rep = validate(p, gr, gt);
  if (!rep.ok())
    throw ValidationError("parameter validation failed: " + rep.to_string());
  if (!is_strongly_connected(gr))
    throw ValidationError("rumor graph is not strongly connected");
  if (!is_strongly_connected(gt))
    throw ValidationError("truth graph is not strongly connected");
}

OsnState resolve_init(Index n, bool all_uncertain, Index init_rumor,
                      Index init_truth, std::uint64_t seed) {
  if (all_uncertain) {
    OsnState s;
    s.states.assign(n, NodeState::uncertain);
    return s;
  }
  if (init_rumor >= 0 || init_truth >= 0) {
    if (init_rumor < 0 || init_truth < 0 || init_rumor == init_truth ||
        init_rumor >= n || init_truth >= n)
      throw ValidationError(
          "--init-rumor/--init-truth must name two distinct nodes");
    OsnState s;
    s.states.assign(n, NodeState::uncertain);
    s.states[init_rumor] = NodeState::rumor;
    s.states[init_truth] = NodeState::truth;
    return s;
  }
  return initial_state_random(n, seed);
}

int run(int argc, char** argv) {
  CLI::App app{"urtu: individual-level rumor/truth interaction toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  std::optional<std::uint64_t> seed_opt;

  // ---- generate ----------------------------------------------------------
  auto* gen = app.add_subcommand("generate", "write a random network edge list");
  std::string gen_kind = "scale-free";
  Index gen_n = 100, gen_m = 3, gen_k = 4;
  double gen_p = 0.1;
  std::string gen_out;
  gen->add_option("--kind", gen_kind, "scale-free | small-world")
      ->check(CLI::IsMember({"scale-free", "small-world"}));
  gen->add_option("--n", gen_n, "node count")->required();
  gen->add_option("--m", gen_m, "attachment count (scale-free)");
  gen->add_option("--k", gen_k, "even neighbor count (small-world)");
  gen->add_option("--p", gen_p, "rewiring probability (small-world)");
  gen->add_option("--seed", seed_opt, "generator seed");
  gen->add_option("--out", gen_out, "output edge-list path")->required();

  // ---- params ------------------------------------------------------------
  auto* par = app.add_subcommand(
      "params", "sample a random parameter set onto a network");
  NetworkArgs par_nets;
  par_nets.attach(par);
  SamplingRanges par_ranges;
  std::string par_family = "linear", par_out;
  double par_c = 1.0;
  par->add_option("--beta-lo", par_ranges.beta_lo);
  par->add_option("--beta-hi", par_ranges.beta_hi);
  par->add_option("--gamma-lo", par_ranges.gamma_lo);
  par->add_option("--gamma-hi", par_ranges.gamma_hi);
  par->add_option("--delta-lo", par_ranges.delta_lo);
  par->add_option("--delta-hi", par_ranges.delta_hi);
  par->add_flag("--homogeneous", par_ranges.homogeneous,
                "one scalar per rate matrix");
  par->add_option("--family", par_family, "linear | saturating")
      ->check(CLI::IsMember({"linear", "saturating"}));
  par->add_option("--saturation-c", par_c, "saturation constant");
  par->add_option("--seed", seed_opt, "sampling seed");
  par->add_option("--out", par_out, "output params JSON path")->required();

  // ---- analyze -----------------------------------------------------------
  auto* ana = app.add_subcommand(
      "analyze", "spectral report: s(Q1), s(Q2), criteria, regime");
  NetworkArgs ana_nets;
  std::string ana_params, ana_out;
  bool ana_equilibrium = false;
  ana->add_option("--params", ana_params, "params JSON file")->required();
  ana_nets.attach(ana);
  ana->add_flag("--equilibrium", ana_equilibrium,
                "also solve the dominant equilibrium when one exists");
  ana->add_option("--out", ana_out, "also write the report to this path");

  // ---- simulate ----------------------------------------------------------
  auto* sim = app.add_subcommand("simulate",
                                 "trajectory of the exact or mean-field model");
  std::string sim_model, sim_params, sim_out, sim_events;
  NetworkArgs sim_nets;
  double sim_t_end = 30.0;
  Index sim_grid = 121;
  int sim_paths = 10000, sim_threads = 0;
  Index sim_init_rumor = -1, sim_init_truth = -1;
  bool sim_uniformization = false, sim_init_uncertain = false;
  sim->add_option("model", sim_model, "exact | ode")
      ->required()
      ->check(CLI::IsMember({"exact", "ode"}));
  sim->add_option("--params", sim_params, "params JSON file")->required();
  sim_nets.attach(sim);
  sim->add_option("--t-end", sim_t_end, "horizon");
  sim->add_option("--grid", sim_grid, "output grid points");
  sim->add_option("--paths", sim_paths, "sample paths (exact model)");
  sim->add_option("--threads", sim_threads, "worker threads (0 = auto)");
  sim->add_option("--seed", seed_opt, "simulation seed");
  sim->add_option("--init-rumor", sim_init_rumor, "rumor-seeded node");
  sim->add_option("--init-truth", sim_init_truth, "truth-seeded node");
  sim->add_flag("--init-uncertain", sim_init_uncertain,
                "start from the all-uncertain state");
  sim->add_flag("--uniformization", sim_uniformization,
                "solve the exact model by uniformization (N <= 9, linear)");
  sim->add_option("--events", sim_events,
                  "also write a single-path event list CSV (exact model)");
  sim->add_option("--out", sim_out, "output trajectory CSV")->required();

  // ---- compare -----------------------------------------------------------
  auto* cmp = app.add_subcommand(
      "compare", "one linear-vs-exact run record from a shared init");
  std::string cmp_params, cmp_out, cmp_plot;
  NetworkArgs cmp_nets;
  CompareOptions cmp_opts;
  cmp->add_option("--params", cmp_params, "params JSON file")->required();
  cmp_nets.attach(cmp);
  cmp->add_option("--paths", cmp_opts.paths, "sample paths");
  cmp->add_option("--t-end", cmp_opts.t_end, "comparison horizon");
  cmp->add_option("--t-end-ode", cmp_opts.t_end_ode, "ODE classification horizon");
  cmp->add_option("--grid", cmp_opts.grid_points, "grid points");
  cmp->add_option("--epsilon", cmp_opts.eps, "approach-zero threshold");
  cmp->add_option("--threads", cmp_opts.ensemble_threads, "worker threads");
  cmp->add_option("--seed", seed_opt, "run seed");
  cmp->add_option("--plot-data", cmp_plot, "write 5-column comparison file");
  cmp->add_option("--out", cmp_out, "also write the record to this path");

  // ---- sweep -------------------------------------------------------------
  auto* swp = app.add_subcommand("sweep", "parameter sweep from a config file");
  std::string swp_config, swp_dir = ".";
  int swp_threads = -1;
  bool swp_plots = false;
  swp->add_option("--config", swp_config, "sweep config JSON")->required();
  swp->add_option("--out-dir", swp_dir, "directory for sweep.csv/summary.json");
  swp->add_option("--threads", swp_threads, "override config worker count");
  swp->add_flag("--plot-data", swp_plots, "write per-run plot-data files");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or a one-line message
    return code == 0 ? 0 : 1;
  }

  if (gen->parsed()) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    const DirectedNetwork net =
        gen_kind == "scale-free"
            ? generate_scale_free(gen_n, gen_m, seed)
            : generate_small_world(gen_n, gen_k, gen_p, seed);
    save_edges(net, gen_out);
    json meta{{"tool_version", kToolVersion}, {"kind", gen_kind},
              {"n", net.node_count()},       {"arcs", net.arc_count()},
              {"seed", seed},                {"out", gen_out}};
    if (gen_kind == "scale-free")
      meta["m"] = gen_m;
    else {
      meta["k"] = gen_k;
      meta["p"] = gen_p;
    }
    std::cout << meta.dump(2) << "\n";
    return 0;
  }

  if (par->parsed()) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    auto [gr, gt] = par_nets.load();
    ParamsFile file;
    file.params = sample_random(gr, gt, par_ranges, seed);
    file.family = rate_kind_from_string(par_family);
    file.saturation = file.family == RateKind::saturating ? par_c : 0.0;
    file.seed = seed;
    require_valid(file.params, gr, gt);
    save_params(file, par_out);
    std::cout << json{{"tool_version", kToolVersion},
                      {"n", file.params.node_count()},
                      {"seed", seed},
                      {"family", par_family},
                      {"out", par_out}}
                     .dump(2)
              << "\n";
    return 0;
  }

  if (ana->parsed()) {
    const ParamsFile file = load_params(ana_params);
    auto [gr, gt] = ana_nets.load();
    require_valid(file.params, gr, gt);
    const RateFamily fam = make_family(file);
    const SpectralReport rep = spectral_report(fam);
    json out = to_json(rep);
    out["tool_version"] = kToolVersion;
    out["params"] = ana_params;
    if (file.seed) out["params_seed"] = *file.seed;
    if (ana_equilibrium && rep.regime != Regime::both_extinct) {
      const EquilibriumKind kind = rep.s1 > 0.0
                                       ? EquilibriumKind::rumor_dominant
                                       : EquilibriumKind::truth_dominant;
      const EquilibriumResult eq = dominant_equilibrium(fam, kind);
      out["equilibrium"] = {
          {"kind", kind == EquilibriumKind::rumor_dominant ? "RumorDominant"
                                                           : "TruthDominant"},
          {"point", std::vector<double>(eq.point.begin(), eq.point.end())},
          {"residual", eq.residual},
          {"iterations", eq.iterations}};
    }
    std::cout << out.dump(2) << "\n";
    if (!ana_out.empty()) {
      std::ofstream f(ana_out);
      if (!f) throw Error("cannot write " + ana_out);
      f << out.dump(2) << "\n";
    }
    return 0;
  }

  if (sim->parsed()) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    const ParamsFile file = load_params(sim_params);
    auto [gr, gt] = sim_nets.load();
    require_valid(file.params, gr, gt);
    const RateFamily fam = make_family(file);
    const Index n = file.params.node_count();
    const OsnState init =
        resolve_init(n, sim_init_uncertain, sim_init_rumor, sim_init_truth,
                     derive_seed(seed, 1));
    const Vector grid = linspace(0.0, sim_t_end, sim_grid);

    Trajectory traj;
    std::string method;
    if (sim_model == "ode") {
      method = "ode";
      traj = integrate(indicator_state(init), file.params, fam, grid);
    } else if (sim_uniformization) {
      method = "uniformization";
      traj = exact_marginals_small(file.params, fam, init, grid);
    } else {
      method = "gillespie-ensemble";
      traj = ensemble_average(file.params, fam, InitPolicy::fixed_state(init),
                              grid, sim_paths, derive_seed(seed, 2),
                              sim_threads);
      if (!sim_events.empty()) {
        const auto events = gillespie_path(file.params, fam, init, sim_t_end,
                                           derive_seed(seed, 3));
        std::ofstream ev(sim_events);
        if (!ev) throw Error("cannot write " + sim_events);
        ev << "t,node,new_state\n";
        for (const auto& e : events)
          ev << e.time << "," << e.node << ","
             << static_cast<int>(e.to) << "\n";
      }
    }
    json resolved{{"model", sim_model},     {"method", method},
                  {"params", sim_params},   {"seed", seed},
                  {"t_end", sim_t_end},     {"grid", sim_grid},
                  {"paths", sim_paths}};
    save_trajectory_csv(traj, sim_out,
                        {{"tool", kToolVersion},
                         {"seed", std::to_string(seed)},
                         {"config", resolved.dump()}});
    resolved["tool_version"] = kToolVersion;
    resolved["out"] = sim_out;
    std::cout << resolved.dump(2) << "\n";
    return 0;
  }

  if (cmp->parsed()) {
    const std::uint64_t seed = resolve_seed(seed_opt);
    const ParamsFile file = load_params(cmp_params);
    auto [gr, gt] = cmp_nets.load();
    require_valid(file.params, gr, gt);
    const RateFamily fam = make_family(file);
    cmp_opts.plot_path = cmp_plot;
    const RunRecord rec = compare_models(file.params, fam, seed, cmp_opts);
    json out = to_json(rec, /*include_timings=*/true);
    out["tool_version"] = kToolVersion;
    out["params"] = cmp_params;
    out["config"] = {{"paths", cmp_opts.paths},
                     {"t_end", cmp_opts.t_end},
                     {"t_end_ode", cmp_opts.t_end_ode},
                     {"grid_points", cmp_opts.grid_points},
                     {"epsilon", cmp_opts.eps}};
    std::cout << out.dump(2) << "\n";
    if (!cmp_out.empty()) {
      std::ofstream f(cmp_out);
      if (!f) throw Error("cannot write " + cmp_out);
      f << out.dump(2) << "\n";
    }
    return 0;
  }

  if (swp->parsed()) {
    SweepConfig cfg = load_sweep_config(swp_config);
    if (swp_threads >= 0) cfg.threads = swp_threads;
    if (swp_plots) cfg.plot_dir = swp_dir;
    const std::string csv_path = swp_dir + "/sweep.csv";
    std::ofstream csv(csv_path);
    if (!csv) throw Error("cannot write " + csv_path);
    const SweepResult res = sweep(cfg, csv);
    const std::string summary_path = swp_dir + "/summary.json";
    std::ofstream summary(summary_path);
    if (!summary) throw Error("cannot write " + summary_path);
    summary << res.summary.dump(2) << "\n";
    std::cout << res.summary.dump(2) << "\n";
    return 0;
  }

  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const urtu::NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
