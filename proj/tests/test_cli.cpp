// End-to-end checks of the command-line surface: spawns the real binary,
// parses its stdout as JSON, and inspects the files it writes.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "urtu/graph.hpp"
#include "urtu/trajectory.hpp"

namespace {

const std::string kCli = URTU_CLI_PATH;
const std::string kDir = "/tmp/urtu_cli_test";

struct CmdResult {
  int code;
  std::string out;
};

CmdResult run_cmd(const std::string& args) {
  const std::string out_file = kDir + "/stdout.txt";
  const std::string cmd = kCli + " " + args + " >" + out_file + " 2>/dev/null";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(out_file);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WEXITSTATUS(raw), ss.str()};
}

nlohmann::json parse_json(const std::string& text) {
  return nlohmann::json::parse(text);
}

}  // namespace

TEST_CASE("cli end to end") {
  std::system(("rm -rf " + kDir + " && mkdir -p " + kDir).c_str());

  SUBCASE("generate writes a loadable network and replayable metadata") {
    const auto res = run_cmd("generate --kind scale-free --n 40 --m 2 --seed 7 --out " +
                             kDir + "/net.edges");
    REQUIRE(res.code == 0);
    const auto meta = parse_json(res.out);
    CHECK(meta.at("n") == 40);
    CHECK(meta.at("seed") == 7);
    const auto net = urtu::load_edges(kDir + "/net.edges");
    CHECK(net.node_count() == 40);
  }

  SUBCASE("analyze reports the expected regime on the 2-node fixture") {
    std::ofstream(kDir + "/ring.edges") << "n=2\n0 1\n1 0\n";
    nlohmann::json pj;
    pj["n"] = 2;
    pj["beta_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.1}, {0.1, 0.0}}}};
    pj["beta_t"] = {{"format", "dense"}, {"rows", {{0.0, 0.05}, {0.05, 0.0}}}};
    pj["gamma_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.1}, {0.1, 0.0}}}};
    pj["gamma_r"] = {{"format", "dense"}, {"rows", {{0.0, 0.05}, {0.05, 0.0}}}};
    pj["delta_r"] = {1.0, 1.0};
    pj["delta_t"] = {1.0, 1.0};
    std::ofstream(kDir + "/fixture.json") << pj.dump();

    const auto res = run_cmd("analyze --params " + kDir + "/fixture.json --gr " +
                             kDir + "/ring.edges");
    REQUIRE(res.code == 0);
    const auto rep = parse_json(res.out);
    CHECK(rep.at("regime") == "BothExtinct");
    CHECK(rep.at("criteria").at("a") == true);
    CHECK(rep.at("criteria").at("d") == true);
    CHECK(rep.at("s1").get<double>() == doctest::Approx(-0.9));
  }

  SUBCASE("params then simulate ode produces trajectory CSV") {
    REQUIRE(run_cmd("generate --kind small-world --n 20 --k 4 --p 0.1 --seed 3 --out " +
                    kDir + "/sw.edges")
                .code == 0);
    REQUIRE(run_cmd("params --gr " + kDir + "/sw.edges --seed 11 --out " + kDir +
                    "/p.json")
                .code == 0);
    const auto res =
        run_cmd("simulate ode --params " + kDir + "/p.json --gr " + kDir +
                "/sw.edges --t-end 10 --grid 21 --seed 5 --out " + kDir +
                "/traj.csv");
    REQUIRE(res.code == 0);
    const auto traj = urtu::load_trajectory_csv(kDir + "/traj.csv");
    CHECK(traj.points() == 21);
    CHECK(traj.nodes() == 20);
    CHECK(traj.times(0) == 0.0);

    // exact model on the same inputs, tiny ensemble for speed
    const auto res2 =
        run_cmd("simulate exact --params " + kDir + "/p.json --gr " + kDir +
                "/sw.edges --t-end 10 --grid 21 --paths 50 --seed 5 --out " +
                kDir + "/traj_exact.csv");
    REQUIRE(res2.code == 0);
    CHECK(urtu::load_trajectory_csv(kDir + "/traj_exact.csv").points() == 21);
  }

  SUBCASE("compare emits a run record with spectral block") {
    std::ofstream(kDir + "/ring.edges") << "n=2\n0 1\n1 0\n";
    nlohmann::json pj;
    pj["n"] = 2;
    pj["beta_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
    pj["beta_t"] = {{"format", "dense"}, {"rows", {{0.0, 0.25}, {0.25, 0.0}}}};
    pj["gamma_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.1}, {0.1, 0.0}}}};
    pj["gamma_r"] = {{"format", "dense"}, {"rows", {{0.0, 0.05}, {0.05, 0.0}}}};
    pj["delta_r"] = {0.2, 0.2};
    pj["delta_t"] = {1.0, 1.0};
    std::ofstream(kDir + "/eq.json") << pj.dump();
    const auto res = run_cmd("compare --params " + kDir + "/eq.json --gr " +
                             kDir + "/ring.edges --paths 100 --t-end 5 "
                             "--grid 11 --seed 9");
    REQUIRE(res.code == 0);
    const auto rec = parse_json(res.out);
    CHECK(rec.at("spectral").at("regime") == "RumorDominant");
    CHECK(rec.contains("max_dev_R"));
    CHECK(rec.at("run_seed") == 9);
  }

  SUBCASE("sweep writes counted rows plus a summary") {
    nlohmann::json cfg{
        {"network", {{"kind", "scale-free"}, {"n", 10}, {"m", 2}}},
        {"count", 4},
        {"paths", 50},
        {"t_end", 5.0},
        {"t_end_ode", 20.0},
        {"grid_points", 11},
        {"master_seed", 21}};
    std::ofstream(kDir + "/sweep.json") << cfg.dump();
    const auto res = run_cmd("sweep --config " + kDir + "/sweep.json --out-dir " + kDir);
    REQUIRE(res.code == 0);
    const auto summary = parse_json(res.out);
    CHECK(summary.at("runs") == 4);

    std::ifstream csv(kDir + "/sweep.csv");
    REQUIRE(csv.good());
    int rows = 0;
    std::string line;
    bool header_seen = false;
    while (std::getline(csv, line)) {
      if (line.rfind("#", 0) == 0) continue;
      if (line.rfind("run,", 0) == 0) {
        header_seen = true;
        continue;
      }
      ++rows;
    }
    CHECK(header_seen);
    CHECK(rows == 4);
    CHECK(std::ifstream(kDir + "/summary.json").good());
  }

  SUBCASE("simulate from the all-uncertain state writes an all-zero CSV") {
    std::ofstream(kDir + "/ring.edges") << "n=2\n0 1\n1 0\n";
    nlohmann::json pj;
    pj["n"] = 2;
    pj["beta_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
    pj["beta_t"] = {{"format", "dense"}, {"rows", {{0.0, 0.25}, {0.25, 0.0}}}};
    pj["gamma_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.1}, {0.1, 0.0}}}};
    pj["gamma_r"] = {{"format", "dense"}, {"rows", {{0.0, 0.05}, {0.05, 0.0}}}};
    pj["delta_r"] = {0.5, 0.5};
    pj["delta_t"] = {0.5, 0.5};
    std::ofstream(kDir + "/z.json") << pj.dump();
    const auto res = run_cmd("simulate ode --params " + kDir + "/z.json --gr " +
                             kDir + "/ring.edges --t-end 4 --grid 9 "
                             "--init-uncertain --seed 2 --out " + kDir +
                             "/z.csv");
    REQUIRE(res.code == 0);
    const auto traj = urtu::load_trajectory_csv(kDir + "/z.csv");
    CHECK(traj.r.isZero(0.0));
    CHECK(traj.t.isZero(0.0));

    // and the uniformization route exposes the exact solver with seeds fixed
    const auto res2 = run_cmd(
        "simulate exact --uniformization --params " + kDir + "/z.json --gr " +
        kDir + "/ring.edges --t-end 4 --grid 9 --init-rumor 0 --init-truth 1 "
        "--seed 2 --out " + kDir + "/u.csv");
    REQUIRE(res2.code == 0);
    const auto unif = urtu::load_trajectory_csv(kDir + "/u.csv");
    CHECK(unif.r(0, 0) == 1.0);
    CHECK(unif.t(0, 1) == 1.0);
  }

  SUBCASE("errors map to the documented exit codes") {
    CHECK(run_cmd("analyze --params /nonexistent.json --gr /nonexistent.edges")
              .code == 1);
    CHECK(run_cmd("generate --kind scale-free --n 2 --m 3 --seed 1 --out " +
                  kDir + "/bad.edges")
              .code == 1);
    CHECK(run_cmd("frobnicate").code == 1);
    CHECK(run_cmd("--help").code == 0);

    // validation failure: params not matching the graph
    std::ofstream(kDir + "/ring3.edges") << "n=3\n0 1\n1 0\n1 2\n2 1\n0 2\n2 0\n";
    std::ofstream(kDir + "/ring.edges") << "n=2\n0 1\n1 0\n";
    nlohmann::json pj;
    pj["n"] = 2;
    pj["beta_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
    pj["beta_t"] = {{"format", "dense"}, {"rows", {{0.0, 0.25}, {0.25, 0.0}}}};
    pj["gamma_u"] = {{"format", "dense"}, {"rows", {{0.0, 0.1}, {0.1, 0.0}}}};
    pj["gamma_r"] = {{"format", "dense"}, {"rows", {{0.0, 0.5}, {0.5, 0.0}}}};
    pj["delta_r"] = {0.5, 0.5};
    pj["delta_t"] = {0.5, 0.5};
    std::ofstream(kDir + "/bad.json") << pj.dump();  // gamma_r > gamma_u
    CHECK(run_cmd("analyze --params " + kDir + "/bad.json --gr " + kDir +
                  "/ring.edges")
              .code == 1);
  }
}
