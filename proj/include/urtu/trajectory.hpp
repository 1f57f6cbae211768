#pragma once

#include <string>
#include <utility>
#include <vector>

#include "urtu/types.hpp"

namespace urtu {

/// Time series of per-node rumor/truth marginals on an increasing grid,
/// plus the population fractions (node means).
struct Trajectory {
  Vector times;  // G grid points
  Matrix r;      // G x N, P(node i rumor-believing at t_g)
  Matrix t;      // G x N
  Vector agg_r;  // G
  Vector agg_t;  // G

  Index points() const { return times.size(); }
  Index nodes() const { return r.cols(); }

  void recompute_aggregates() {
    agg_r = r.rowwise().mean();
    agg_t = t.rowwise().mean();
  }
};

/// CSV layout: optional leading "# key=value" lines, then the header
/// t,R,T,R_1..R_N,T_1..T_N and one row per grid point, 17 significant
/// digits (round-trips exactly).
void save_trajectory_csv(
    const Trajectory& traj, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& meta = {});

Trajectory load_trajectory_csv(const std::string& path);

}  // namespace urtu
