#include "urtu/trajectory.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "urtu/errors.hpp"

namespace urtu {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void save_trajectory_csv(
    const Trajectory& traj, const std::string& path,
    const std::vector<std::pair<std::string, std::string>>& meta) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write trajectory file: " + path);
  for (const auto& [k, v] : meta) out << "# " << k << "=" << v << "\n";
  const Index n = traj.nodes();
  out << "t,R,T";
  for (Index i = 0; i < n; ++i) out << ",R_" << (i + 1);
  for (Index i = 0; i < n; ++i) out << ",T_" << (i + 1);
  out << "\n";
  for (Index g = 0; g < traj.points(); ++g) {
    out << fmt(traj.times(g)) << "," << fmt(traj.agg_r(g)) << ","
        << fmt(traj.agg_t(g));
    for (Index i = 0; i < n; ++i) out << "," << fmt(traj.r(g, i));
    for (Index i = 0; i < n; ++i) out << "," << fmt(traj.t(g, i));
    out << "\n";
  }
  if (!out) throw Error("write failed: " + path);
}

Trajectory load_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open trajectory file: " + path);
  std::string line;
  Index n = -1;
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (line.rfind("t,", 0) == 0) {
      Index cols = 1;
      for (char c : line)
        if (c == ',') ++cols;
      n = (cols - 3) / 2;
      continue;
    }
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (n < 0) throw ParseError(path + ": missing trajectory header");
  Trajectory traj;
  const Index g_count = static_cast<Index>(rows.size());
  traj.times.resize(g_count);
  traj.agg_r.resize(g_count);
  traj.agg_t.resize(g_count);
  traj.r.resize(g_count, n);
  traj.t.resize(g_count, n);
  for (Index g = 0; g < g_count; ++g) {
    const auto& row = rows[g];
    if (static_cast<Index>(row.size()) != 3 + 2 * n)
      throw ParseError(path + ": row " + std::to_string(g) + " has wrong width");
    traj.times(g) = row[0];
    traj.agg_r(g) = row[1];
    traj.agg_t(g) = row[2];
    for (Index i = 0; i < n; ++i) traj.r(g, i) = row[3 + i];
    for (Index i = 0; i < n; ++i) traj.t(g, i) = row[3 + n + i];
  }
  return traj;
}

}  // namespace urtu
