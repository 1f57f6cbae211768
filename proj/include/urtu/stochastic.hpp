#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>

#include "urtu/meanfield.hpp"
#include "urtu/rates.hpp"
#include "urtu/trajectory.hpp"
#include "urtu/types.hpp"

namespace urtu {

enum class NodeState : std::uint8_t { uncertain = 0, rumor = 1, truth = 2 };

/// Hard {uncertain, rumor, truth}^N configuration of the population.
struct OsnState {
  std::vector<NodeState> states;

  Index node_count() const { return static_cast<Index>(states.size()); }
  bool operator==(const OsnState& o) const { return states == o.states; }
};

/// Base-3 index of a configuration (node i contributes states[i] * 3^i).
std::uint64_t state_index(const OsnState& s);

/// Marginal point with P = 1 on each believer's own state.
ProbabilityState indicator_state(const OsnState& s);

/// One uniformly random rumor seed and one distinct truth seed; everyone
/// else uncertain. Requires n >= 2.
OsnState initial_state_random(Index n, std::uint64_t seed);

struct Event {
  double time;
  Index node;
  NodeState to;
};

/// Statistically exact sample path of the individual-level chain up to
/// t_max. Per-node transition rates at configuration x:
///   uncertain -> rumor  at fU_i(1_{x=rumor}),  uncertain -> truth at gU_i(1_{x=truth}),
///   rumor -> truth at gR_i(1_{x=truth}),       truth -> rumor at fT_i(1_{x=rumor}),
///   rumor -> uncertain at delta_r_i,           truth -> uncertain at delta_t_i.
std::vector<Event> gillespie_path(const UrtuParams& p, const RateFamily& fam,
                                  const OsnState& init, double t_max,
                                  std::uint64_t seed);

/// How each sample path picks its initial configuration.
struct InitPolicy {
  std::optional<OsnState> fixed;  // empty = fresh random pair per path

  static InitPolicy fixed_state(OsnState s) { return {std::move(s)}; }
  static InitPolicy resample() { return {}; }
};

/// Across-path state frequencies at each grid time. Path k draws from seed
/// child k, and counts are integers, so the result is bitwise identical for
/// any worker count. threads = 0 picks the hardware concurrency.
Trajectory ensemble_average(const UrtuParams& p, const RateFamily& fam,
                            const InitPolicy& init, const Vector& t_grid,
                            int paths, std::uint64_t seed, int threads = 0);

/// Infinitesimal generator of the full 3^N-state chain, linear rates;
/// entry (a, b) is the rate of configuration a -> b, rows sum to zero.
Eigen::SparseMatrix<double> exact_generator(const UrtuParams& p);

/// Distribution over all 3^N configurations at the grid times (row g is
/// s(t_g)^T), propagated by uniformization to absolute tolerance tol.
Matrix exact_distribution_small(const UrtuParams& p, const OsnState& init,
                                const Vector& t_grid, double tol = 1e-10);

/// Transient marginals by uniformization of the full chain to absolute
/// tolerance tol; the small-N truth oracle. Requires N <= 9 and a linear
/// family.
Trajectory exact_marginals_small(const UrtuParams& p, const RateFamily& fam,
                                 const OsnState& init, const Vector& t_grid,
                                 double tol = 1e-10);

}  // namespace urtu
