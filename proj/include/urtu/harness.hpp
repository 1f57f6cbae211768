#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "urtu/analysis.hpp"
#include "urtu/graph.hpp"
#include "urtu/meanfield.hpp"
#include "urtu/params.hpp"
#include "urtu/stochastic.hpp"
#include "urtu/trajectory.hpp"

namespace urtu {

/// The four collections: which of R(t), T(t) approaches zero.
enum class Outcome { both_zero, rumor_persists, truth_persists, both_persist };

const char* to_string(Outcome o);

/// A quantity "approaches zero" iff its aggregate stays below eps
/// throughout the final window. window <= 0 selects the default last 20%
/// of the time span; a window longer than the span is an error.
Outcome classify_outcome(const Trajectory& traj, double eps = 1e-3,
                         double window = 0.0);

/// Re-integrates with doubled horizon (up to cap) while the aggregate
/// R+T still moves faster than eps/10 per unit time in the final window.
Trajectory integrate_settled(const ProbabilityState& s0, const UrtuParams& p,
                             const RateFamily& fam, double t_end, double cap,
                             Index grid_points, double eps,
                             const IntegratorOptions& opts = {});

struct CompareOptions {
  int paths = 10000;
  double t_end = 30.0;        // shared comparison horizon
  double t_end_ode = 200.0;   // classification horizon for the ODE
  double horizon_cap = 1600.0;
  Index grid_points = 121;
  double eps = 1e-3;
  double window = 0.0;  // 0 = default rule
  int ensemble_threads = 0;
  std::string plot_path;  // when set, writes the 5-column comparison file
};

struct RunRecord {
  int run_index = -1;
  std::uint64_t run_seed = 0;
  std::uint64_t params_seed = 0;
  std::uint64_t init_seed = 0;
  std::uint64_t sim_seed = 0;
  SpectralReport spectral;
  Outcome outcome_ode = Outcome::both_zero;
  Outcome outcome_ensemble = Outcome::both_zero;
  double max_dev_r = 0.0, mean_dev_r = 0.0;
  double max_dev_t = 0.0, mean_dev_t = 0.0;
  double ode_horizon = 0.0;   // after auto-extension
  double ode_final_r = 0.0;   // aggregate endpoints at the settled horizon
  double ode_final_t = 0.0;
  double ensemble_seconds = 0.0;  // diagnostics only; never serialized into
  double ode_seconds = 0.0;       // byte-deterministic sweep outputs
  std::string error;

  bool failed() const { return !error.empty(); }
};

nlohmann::json to_json(const RunRecord& rec, bool include_timings);

/// Runs the ensemble-averaged chain and the mean-field ODE from the same
/// sampled initial configuration and measures aggregate deviations on the
/// shared grid.
RunRecord compare_models(const UrtuParams& p, const RateFamily& fam,
                         std::uint64_t run_seed, const CompareOptions& opts);

struct SweepConfig {
  // network: generated once per sweep and shared by gr/gt, or loaded
  std::string kind = "scale-free";  // scale-free | small-world | file
  Index n = 100;
  Index ba_m = 3;
  Index ws_k = 4;
  double ws_p = 0.1;
  std::string edges_path;     // kind == file
  std::string edges_path_gt;  // optional distinct truth graph

  int count = 64;
  SamplingRanges ranges{0.0, 1.0, 0.0, 1.0, 0.1, 1.0, true};
  RateKind family = RateKind::linear;
  double saturation = 0.0;
  CompareOptions run;
  std::uint64_t master_seed = 0;
  int threads = 0;             // run-level workers; not part of the output
  std::string plot_dir;        // when set, per-run plot-data files
};

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json sweep_config_to_json(const SweepConfig& cfg);
SweepConfig load_sweep_config(const std::string& path);

struct SweepResult {
  std::vector<RunRecord> records;
  nlohmann::json summary;
};

/// Deterministic enumeration with per-run child seeds; rows stream to csv
/// in run order as runs finish. Per-run failures are recorded in-row and
/// the sweep continues. Output bytes are independent of the worker count.
SweepResult sweep(const SweepConfig& cfg, std::ostream& csv);

/// Writes "t R_linear T_linear R_exact T_exact" rows; the grids must agree.
void emit_plot_data(const Trajectory& ode, const Trajectory& ensemble,
                    const std::string& path);

}  // namespace urtu
