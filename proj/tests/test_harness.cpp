#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "urtu/errors.hpp"
#include "urtu/harness.hpp"
#include "urtu/rng.hpp"

using namespace urtu;

namespace {

Trajectory constant_trajectory(double r, double t, double t_end = 100.0) {
  Trajectory traj;
  traj.times = linspace(0.0, t_end, 51);
  traj.r = Matrix::Constant(51, 2, r);
  traj.t = Matrix::Constant(51, 2, t);
  traj.recompute_aggregates();
  return traj;
}

SweepConfig small_sweep_config() {
  SweepConfig cfg;
  cfg.kind = "scale-free";
  cfg.n = 12;
  cfg.ba_m = 2;
  cfg.count = 6;
  cfg.run.paths = 200;
  cfg.run.t_end = 10.0;
  cfg.run.t_end_ode = 50.0;
  cfg.run.horizon_cap = 400.0;
  cfg.run.grid_points = 21;
  cfg.master_seed = 4242;
  return cfg;
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("classification of canonical trajectories") {
  CHECK(classify_outcome(constant_trajectory(0.0, 0.0)) == Outcome::both_zero);
  CHECK(classify_outcome(constant_trajectory(0.4, 0.0)) ==
        Outcome::rumor_persists);
  CHECK(classify_outcome(constant_trajectory(0.0, 0.4)) ==
        Outcome::truth_persists);
  CHECK(classify_outcome(constant_trajectory(0.4, 0.4)) ==
        Outcome::both_persist);
}

TEST_CASE("window longer than the span is an insufficient horizon") {
  const auto traj = constant_trajectory(0.1, 0.1, 10.0);
  CHECK_THROWS_WITH_AS(classify_outcome(traj, 1e-3, 20.0),
                       doctest::Contains("insufficient-horizon"), DomainError);
}

TEST_CASE("equilibrium-bound run classifies as RumorPersists") {
  const auto net = fixtures::ring2();
  // beta = 0.5, delta = 0.2: R* = 0.6; truth side subcritical
  const auto p = fixtures::homogeneous(net, net, 0.5, 0.25, 0.1, 0.05, 0.2, 1.0);
  const auto fam = linear_family(p);
  ProbabilityState s0{Vector::Constant(2, 0.3), Vector::Constant(2, 0.1)};
  const auto traj = integrate_settled(s0, p, fam, 100.0, 1600.0, 51, 1e-3);
  CHECK(classify_outcome(traj) == Outcome::rumor_persists);
  CHECK(std::abs(traj.agg_r(traj.points() - 1) - 0.6) < 1e-3);

  SUBCASE("classification is stable across nearby thresholds") {
    for (double eps : {5e-4, 1e-3, 2e-3})
      CHECK(classify_outcome(traj, eps) == Outcome::rumor_persists);
  }
}

TEST_CASE("compare_models is deterministic and internally consistent") {
  const auto net = fixtures::random_connected(8, 0.4, 1);
  const auto p = sample_random(net, net, {}, 2);
  const auto fam = linear_family(p);
  CompareOptions opts;
  opts.paths = 300;
  opts.t_end = 8.0;
  opts.t_end_ode = 40.0;
  opts.grid_points = 17;
  const auto a = compare_models(p, fam, 77, opts);
  const auto b = compare_models(p, fam, 77, opts);
  CHECK(a.max_dev_r == b.max_dev_r);
  CHECK(a.mean_dev_t == b.mean_dev_t);
  CHECK(a.outcome_ensemble == b.outcome_ensemble);
  CHECK(a.outcome_ode == b.outcome_ode);
  CHECK(a.spectral.s1 == b.spectral.s1);
  CHECK(a.max_dev_r >= a.mean_dev_r);
  CHECK(a.max_dev_r <= 1.0);
}

TEST_CASE("plot data has five strictly ordered columns that round-trip") {
  const auto net = fixtures::ring2();
  const auto p = fixtures::homogeneous(net, net, 0.3, 0.15, 0.3, 0.15, 0.5, 0.5);
  const auto fam = linear_family(p);
  CompareOptions opts;
  opts.paths = 100;
  opts.t_end = 5.0;
  opts.grid_points = 11;
  opts.plot_path = "/tmp/urtu_test_plot.dat";
  (void)compare_models(p, fam, 5, opts);

  std::ifstream in(opts.plot_path);
  REQUIRE(in.good());
  std::string line;
  double prev_t = -1.0;
  int rows = 0;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    double t, rl, tl, re, te;
    REQUIRE(static_cast<bool>(ls >> t >> rl >> tl >> re >> te));
    std::string extra;
    CHECK_FALSE(static_cast<bool>(ls >> extra));
    CHECK(t > prev_t);
    prev_t = t;
    ++rows;
  }
  CHECK(rows == 11);
  std::remove(opts.plot_path.c_str());
}

TEST_CASE("sweep partitions its runs and reruns byte-identically") {
  const auto cfg = small_sweep_config();

  std::ostringstream csv1, csv2, csv3;
  SweepConfig cfg1 = cfg;
  cfg1.threads = 1;
  SweepConfig cfg2 = cfg;
  cfg2.threads = 2;
  SweepConfig cfg3 = cfg;
  cfg3.threads = 4;
  const auto res1 = sweep(cfg1, csv1);
  const auto res2 = sweep(cfg2, csv2);
  const auto res3 = sweep(cfg3, csv3);

  CHECK(csv1.str() == csv2.str());
  CHECK(csv1.str() == csv3.str());
  CHECK(res1.summary == res2.summary);

  int total = 0;
  for (const char* key : {"BothZero", "RumorPersists", "TruthPersists",
                          "BothPersist"})
    total += res1.summary.at("collections").at(key).at("count").get<int>();
  CHECK(total + res1.summary.at("failures").get<int>() == cfg.count);

  // header + 6 rows + 3 comment lines
  int lines = 0;
  std::istringstream is(csv1.str());
  std::string line;
  while (std::getline(is, line)) ++lines;
  CHECK(lines == 3 + 1 + cfg.count);
}

TEST_CASE("theorem consistency on a margin-filtered sweep") {
  SweepConfig cfg = small_sweep_config();
  cfg.count = 12;
  cfg.master_seed = 99;
  std::ostringstream csv;
  const auto res = sweep(cfg, csv);
  int inspected = 0;
  for (const auto& rec : res.records) {
    REQUIRE_FALSE(rec.failed());
    const double s1 = rec.spectral.s1, s2 = rec.spectral.s2;
    if (std::max(std::abs(s1), std::abs(s2)) < 0.05) continue;  // near ties
    if (rec.spectral.regime == Regime::both_extinct) {
      CHECK(rec.outcome_ode == Outcome::both_zero);
      ++inspected;
    } else if (rec.spectral.regime == Regime::rumor_dominant && s1 > 0.05) {
      CHECK(rec.outcome_ode == Outcome::rumor_persists);
      ++inspected;
    }
  }
  CHECK(inspected > 0);
}

TEST_CASE("sweep config round-trips through JSON") {
  const auto cfg = small_sweep_config();
  const auto j = sweep_config_to_json(cfg);
  const auto back = sweep_config_from_json(j);
  CHECK(back.n == cfg.n);
  CHECK(back.count == cfg.count);
  CHECK(back.run.paths == cfg.run.paths);
  CHECK(back.run.t_end == cfg.run.t_end);
  CHECK(back.master_seed == cfg.master_seed);
  CHECK(sweep_config_to_json(back) == j);
}

}  // TEST_SUITE
