#include "urtu/stochastic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "urtu/errors.hpp"
#include "urtu/rng.hpp"

namespace urtu {

std::uint64_t state_index(const OsnState& s) {
  std::uint64_t idx = 0;
  std::uint64_t place = 1;
  for (NodeState v : s.states) {
    idx += static_cast<std::uint64_t>(v) * place;
    place *= 3;
  }
  return idx;
}

ProbabilityState indicator_state(const OsnState& s) {
  const Index n = s.node_count();
  ProbabilityState ps{Vector::Zero(n), Vector::Zero(n)};
  for (Index i = 0; i < n; ++i) {
    if (s.states[i] == NodeState::rumor) ps.r(i) = 1.0;
    if (s.states[i] == NodeState::truth) ps.t(i) = 1.0;
  }
  return ps;
}

OsnState initial_state_random(Index n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("initial_state_random: need n >= 2");
  Rng rng(seed);
  const Index rumor = static_cast<Index>(rng.below(n));
  Index truth = static_cast<Index>(rng.below(n - 1));
  if (truth >= rumor) ++truth;
  OsnState s;
  s.states.assign(n, NodeState::uncertain);
  s.states[rumor] = NodeState::rumor;
  s.states[truth] = NodeState::truth;
  return s;
}

namespace {

void check_params_basic(const UrtuParams& p) {
  const Index n = p.node_count();
  if (n < 1 || p.beta_u.rows() != n || p.beta_u.cols() != n ||
      p.beta_t.rows() != n || p.beta_t.cols() != n || p.gamma_u.rows() != n ||
      p.gamma_u.cols() != n || p.gamma_r.rows() != n ||
      p.gamma_r.cols() != n || p.delta_t.size() != n)
    throw ValidationError("params: dimension mismatch");
  if ((p.delta_r.array() <= 0.0).any() || (p.delta_t.array() <= 0.0).any())
    throw ValidationError("params: forgetting rates must be positive");
  if ((p.beta_u.array() < 0.0).any() || (p.beta_t.array() < 0.0).any() ||
      (p.gamma_u.array() < 0.0).any() || (p.gamma_r.array() < 0.0).any())
    throw ValidationError("params: negative rate entry");
}

struct InfluenceEntry {
  Index node;
  double w_u;  // rate onto an uncertain receiver
  double w_c;  // rate onto a converted receiver (truth- resp. rumor-believer)
};

// Per-sender receiver lists with both weights; support of beta_u is the
// rumor graph, support of gamma_u the truth graph (validated upstream).
struct SimTables {
  const UrtuParams* p;
  RateFamily fam;
  Index n;
  std::vector<std::vector<InfluenceEntry>> rumor_out;
  std::vector<std::vector<InfluenceEntry>> truth_out;

  SimTables(const UrtuParams& params, const RateFamily& family)
      : p(&params), fam(family), n(params.node_count()) {
    rumor_out.resize(n);
    truth_out.resize(n);
    for (Index j = 0; j < n; ++j)
      for (Index i = 0; i < n; ++i) {
        if (params.beta_u(i, j) > 0.0)
          rumor_out[j].push_back({i, params.beta_u(i, j), params.beta_t(i, j)});
        if (params.gamma_u(i, j) > 0.0)
          truth_out[j].push_back({i, params.gamma_u(i, j), params.gamma_r(i, j)});
      }
  }
};

// One sample path: per-node rate cache with O(out-degree) updates after
// each event, linear-scan node selection.
class PathSim {
 public:
  explicit PathSim(const SimTables& tables)
      : tb_(tables),
        state_(tables.n),
        agg_bu_(tables.n),
        agg_bt_(tables.n),
        agg_cu_(tables.n),
        agg_cr_(tables.n),
        node_rate_(tables.n) {}

  void reset(const OsnState& init) {
    if (init.node_count() != tb_.n)
      throw ValidationError("gillespie: init size mismatch");
    std::copy(init.states.begin(), init.states.end(), state_.begin());
    time_ = 0.0;
    events_since_rebuild_ = 0;
    rebuild();
  }

  double time() const { return time_; }
  NodeState state(Index i) const { return state_[i]; }

  /// Samples the next event; nullopt when the configuration is absorbing.
  std::optional<Event> next_event(Rng& rng) {
    if (total_rate_ <= 0.0) return std::nullopt;
    const double dt = rng.exponential(total_rate_);
    const double target = rng.uniform() * total_rate_;
    double cum = 0.0;
    Index node = -1;
    for (Index i = 0; i < tb_.n; ++i) {
      if (node_rate_[i] <= 0.0) continue;
      cum += node_rate_[i];
      node = i;
      if (cum > target) break;
    }
    if (node < 0) return std::nullopt;  // cache drift left a phantom total

    NodeState to;
    const double pick = rng.uniform() * node_rate_[node];
    switch (state_[node]) {
      case NodeState::uncertain:
        to = pick < rate_value(tb_.fam, agg_bu_[node]) ? NodeState::rumor
                                                       : NodeState::truth;
        break;
      case NodeState::rumor:
        to = pick < rate_value(tb_.fam, agg_cr_[node]) ? NodeState::truth
                                                       : NodeState::uncertain;
        break;
      default:
        to = pick < rate_value(tb_.fam, agg_bt_[node]) ? NodeState::rumor
                                                       : NodeState::uncertain;
        break;
    }
    return Event{time_ + dt, node, to};
  }

  void apply(const Event& ev) {
    const Index m = ev.node;
    const NodeState from = state_[m];
    time_ = ev.time;
    if (from == ev.to) return;

    if (from == NodeState::rumor) {
      --rumor_count_;
      shift_rumor(m, -1.0);
    } else if (from == NodeState::truth) {
      --truth_count_;
      shift_truth(m, -1.0);
    }
    state_[m] = ev.to;
    if (ev.to == NodeState::rumor) {
      ++rumor_count_;
      shift_rumor(m, +1.0);
    } else if (ev.to == NodeState::truth) {
      ++truth_count_;
      shift_truth(m, +1.0);
    }
    refresh_rate(m);

    // Exact zeros matter: with no believers left the adoption aggregates
    // must be identically zero, not float residue, or extinct paths could
    // resurrect. Periodic rebuilds bound drift on long paths.
    if (rumor_count_ == 0 || truth_count_ == 0 ||
        ++events_since_rebuild_ >= 4096)
      rebuild();
  }

 private:
  void shift_rumor(Index j, double sign) {
    for (const auto& e : tb_.rumor_out[j]) {
      agg_bu_[e.node] += sign * e.w_u;
      agg_bt_[e.node] += sign * e.w_c;
      refresh_rate(e.node);
    }
  }

  void shift_truth(Index j, double sign) {
    for (const auto& e : tb_.truth_out[j]) {
      agg_cu_[e.node] += sign * e.w_u;
      agg_cr_[e.node] += sign * e.w_c;
      refresh_rate(e.node);
    }
  }

  void refresh_rate(Index i) {
    double r;
    switch (state_[i]) {
      case NodeState::uncertain:
        r = rate_value(tb_.fam, agg_bu_[i]) + rate_value(tb_.fam, agg_cu_[i]);
        break;
      case NodeState::rumor:
        r = rate_value(tb_.fam, agg_cr_[i]) + tb_.p->delta_r(i);
        break;
      default:
        r = rate_value(tb_.fam, agg_bt_[i]) + tb_.p->delta_t(i);
        break;
    }
    total_rate_ += r - node_rate_[i];
    node_rate_[i] = r;
  }

  void rebuild() {
    events_since_rebuild_ = 0;
    std::fill(agg_bu_.begin(), agg_bu_.end(), 0.0);
    std::fill(agg_bt_.begin(), agg_bt_.end(), 0.0);
    std::fill(agg_cu_.begin(), agg_cu_.end(), 0.0);
    std::fill(agg_cr_.begin(), agg_cr_.end(), 0.0);
    rumor_count_ = 0;
    truth_count_ = 0;
    for (Index j = 0; j < tb_.n; ++j) {
      if (state_[j] == NodeState::rumor) {
        ++rumor_count_;
        for (const auto& e : tb_.rumor_out[j]) {
          agg_bu_[e.node] += e.w_u;
          agg_bt_[e.node] += e.w_c;
        }
      } else if (state_[j] == NodeState::truth) {
        ++truth_count_;
        for (const auto& e : tb_.truth_out[j]) {
          agg_cu_[e.node] += e.w_u;
          agg_cr_[e.node] += e.w_c;
        }
      }
    }
    total_rate_ = 0.0;
    for (Index i = 0; i < tb_.n; ++i) {
      node_rate_[i] = 0.0;  // refresh_rate adjusts the running total
      refresh_rate(i);
    }
  }

  const SimTables& tb_;
  std::vector<NodeState> state_;
  std::vector<double> agg_bu_, agg_bt_, agg_cu_, agg_cr_;
  std::vector<double> node_rate_;
  double total_rate_ = 0.0;
  double time_ = 0.0;
  Index rumor_count_ = 0;
  Index truth_count_ = 0;
  int events_since_rebuild_ = 0;
};

}  // namespace

std::vector<Event> gillespie_path(const UrtuParams& p, const RateFamily& fam,
                                  const OsnState& init, double t_max,
                                  std::uint64_t seed) {
  if (!(t_max > 0.0)) throw ValidationError("gillespie: t_max must be > 0");
  check_params_basic(p);
  SimTables tables(p, fam);
  PathSim sim(tables);
  sim.reset(init);
  Rng rng(seed);
  std::vector<Event> events;
  while (true) {
    auto ev = sim.next_event(rng);
    if (!ev || ev->time > t_max) break;
    sim.apply(*ev);
    events.push_back(*ev);
  }
  return events;
}

Trajectory ensemble_average(const UrtuParams& p, const RateFamily& fam,
                            const InitPolicy& init, const Vector& t_grid,
                            int paths, std::uint64_t seed, int threads) {
  check_params_basic(p);
  const Index g_count = t_grid.size();
  if (paths < 1) throw ValidationError("ensemble: need paths >= 1");
  if (g_count < 1 || t_grid(0) != 0.0)
    throw ValidationError("ensemble: grid must start at 0");
  for (Index g = 1; g < g_count; ++g)
    if (!(t_grid(g) > t_grid(g - 1)))
      throw ValidationError("ensemble: grid must be strictly increasing");
  const Index n = p.node_count();
  if (init.fixed && init.fixed->node_count() != n)
    throw ValidationError("ensemble: init size mismatch");
  if (!init.fixed && n < 2)
    throw ValidationError("ensemble: resampling init needs n >= 2");

  const SimTables tables(p, fam);
  const double t_max = t_grid(g_count - 1);

  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::clamp(workers, 1, paths);

  // Integer state counts per (grid point, node); integer addition commutes,
  // so any path-to-worker assignment yields bitwise identical results.
  using Counts = std::vector<std::uint32_t>;
  const std::size_t cells = static_cast<std::size_t>(g_count) * n * 2;
  std::vector<Counts> partial(workers, Counts(cells, 0));

  std::atomic<int> next_path{0};
  auto work = [&](int w) {
    PathSim sim(tables);
    Counts& counts = partial[w];
    while (true) {
      const int k = next_path.fetch_add(1);
      if (k >= paths) break;
      Rng rng(derive_seed(seed, 2 * static_cast<std::uint64_t>(k)));
      const OsnState start =
          init.fixed ? *init.fixed
                     : initial_state_random(
                           n, derive_seed(seed, 2 * static_cast<std::uint64_t>(k) + 1));
      sim.reset(start);

      Index g = 0;
      auto record_until = [&](double t_next) {
        while (g < g_count && t_grid(g) < t_next) {
          const std::size_t base = static_cast<std::size_t>(g) * n * 2;
          for (Index i = 0; i < n; ++i) {
            if (sim.state(i) == NodeState::rumor)
              ++counts[base + i];
            else if (sim.state(i) == NodeState::truth)
              ++counts[base + n + i];
          }
          ++g;
        }
      };

      while (g < g_count) {
        auto ev = sim.next_event(rng);
        if (!ev || ev->time > t_max) {
          record_until(std::numeric_limits<double>::infinity());
          break;
        }
        record_until(ev->time);
        sim.apply(*ev);
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& th : pool) th.join();
  }

  Counts total(cells, 0);
  for (const Counts& c : partial)
    for (std::size_t idx = 0; idx < cells; ++idx) total[idx] += c[idx];

  Trajectory traj;
  traj.times = t_grid;
  traj.r.resize(g_count, n);
  traj.t.resize(g_count, n);
  const double inv_m = 1.0 / static_cast<double>(paths);
  for (Index g = 0; g < g_count; ++g) {
    const std::size_t base = static_cast<std::size_t>(g) * n * 2;
    for (Index i = 0; i < n; ++i) {
      traj.r(g, i) = total[base + i] * inv_m;
      traj.t(g, i) = total[base + n + i] * inv_m;
    }
  }
  traj.recompute_aggregates();
  return traj;
}

namespace {

constexpr Index kMaxExactNodes = 9;

}  // namespace

Eigen::SparseMatrix<double> exact_generator(const UrtuParams& p) {
  check_params_basic(p);
  const Index n = p.node_count();
  if (n > kMaxExactNodes)
    throw CapacityError("exact generator: N > 9 (state space 3^N)");

  std::uint64_t pow3[kMaxExactNodes + 1];
  pow3[0] = 1;
  for (Index i = 0; i < n; ++i) pow3[i + 1] = pow3[i] * 3;
  const Index states = static_cast<Index>(pow3[n]);

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<std::size_t>(states) * (2 * n + 1));
  std::vector<int> digit(n);
  for (Index a = 0; a < states; ++a) {
    {
      std::uint64_t rest = static_cast<std::uint64_t>(a);
      for (Index m = 0; m < n; ++m) {
        digit[m] = static_cast<int>(rest % 3);
        rest /= 3;
      }
    }
    double exit = 0.0;
    auto add = [&](Index b, double rate) {
      if (rate <= 0.0) return;
      trip.emplace_back(a, b, rate);
      exit += rate;
    };
    for (Index m = 0; m < n; ++m) {
      // linear aggregates over current believers
      double bu = 0.0, bt = 0.0, cu = 0.0, cr = 0.0;
      for (Index k = 0; k < n; ++k) {
        if (digit[k] == 1) {
          bu += p.beta_u(m, k);
          bt += p.beta_t(m, k);
        } else if (digit[k] == 2) {
          cu += p.gamma_u(m, k);
          cr += p.gamma_r(m, k);
        }
      }
      const Index step = static_cast<Index>(pow3[m]);
      switch (digit[m]) {
        case 0:
          add(a + step, bu);       // uncertain -> rumor
          add(a + 2 * step, cu);   // uncertain -> truth
          break;
        case 1:
          add(a - step, p.delta_r(m));  // rumor -> uncertain
          add(a + step, cr);            // rumor -> truth
          break;
        default:
          add(a - 2 * step, p.delta_t(m));  // truth -> uncertain
          add(a - step, bt);                // truth -> rumor
          break;
      }
    }
    trip.emplace_back(a, a, -exit);
  }
  Eigen::SparseMatrix<double> q(states, states);
  q.setFromTriplets(trip.begin(), trip.end());
  return q;
}

Matrix exact_distribution_small(const UrtuParams& p, const OsnState& init,
                                const Vector& t_grid, double tol) {
  const Index n = p.node_count();
  if (init.node_count() != n)
    throw ValidationError("exact distribution: init size mismatch");
  const Index g_count = t_grid.size();
  if (g_count < 1 || t_grid(0) != 0.0)
    throw ValidationError("exact distribution: grid must start at 0");
  for (Index g = 1; g < g_count; ++g)
    if (!(t_grid(g) > t_grid(g - 1)))
      throw ValidationError("exact distribution: grid must be strictly increasing");

  const Eigen::SparseMatrix<double> q = exact_generator(p);
  const Index states = q.rows();

  double lambda = 0.0;
  for (Index a = 0; a < states; ++a)
    lambda = std::max(lambda, -q.coeff(a, a));
  lambda *= 1.000001;

  // Forward equation in column form: v(t+d) = exp(Q^T d) v(t), expanded as
  // Poisson-weighted powers of P^T = I + Q^T / lambda.
  const Eigen::SparseMatrix<double> qt = q.transpose();
  const double tol_step =
      tol / static_cast<double>(std::max<Index>(g_count - 1, 1));

  Vector v = Vector::Zero(states);
  v(static_cast<Index>(state_index(init))) = 1.0;

  Matrix dist(g_count, states);
  dist.row(0) = v;
  Vector term(states), next(states);
  for (Index g = 1; g < g_count; ++g) {
    const double mu = lambda * (t_grid(g) - t_grid(g - 1));
    if (mu > 0.0) {
      term = v;
      double log_w = -mu;  // log Poisson(mu; 0)
      Vector acc = std::exp(log_w) * term;
      double cum = std::exp(log_w);
      const double log_mu = std::log(mu);
      for (int k = 1; cum < 1.0 - tol_step; ++k) {
        next = term + (qt * term) / lambda;
        term.swap(next);
        log_w += log_mu - std::log(static_cast<double>(k));
        const double w = std::exp(log_w);
        acc += w * term;
        cum += w;
        if (k > 1000000)
          throw NumericError("uniformization: series did not converge");
      }
      v = acc;
    }
    dist.row(g) = v;
  }
  return dist;
}

Trajectory exact_marginals_small(const UrtuParams& p, const RateFamily& fam,
                                 const OsnState& init, const Vector& t_grid,
                                 double tol) {
  if (fam.kind != RateKind::linear)
    throw ValidationError("exact marginals: only the linear family is exact");
  const Index n = p.node_count();
  if (n > kMaxExactNodes)
    throw CapacityError("exact marginals: N > 9 (state space 3^N)");
  const Matrix dist = exact_distribution_small(p, init, t_grid, tol);
  const Index g_count = t_grid.size();

  Trajectory traj;
  traj.times = t_grid;
  traj.r = Matrix::Zero(g_count, n);
  traj.t = Matrix::Zero(g_count, n);
  for (Index a = 0; a < dist.cols(); ++a) {
    std::uint64_t rest = static_cast<std::uint64_t>(a);
    for (Index m = 0; m < n; ++m) {
      const int d = static_cast<int>(rest % 3);
      rest /= 3;
      if (d == 1)
        traj.r.col(m) += dist.col(a);
      else if (d == 2)
        traj.t.col(m) += dist.col(a);
    }
  }
  traj.recompute_aggregates();
  return traj;
}

}  // namespace urtu
