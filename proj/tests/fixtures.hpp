// Small networks and parameter sets shared across the test suites.
#pragma once

#include <utility>
#include <vector>

#include "urtu/graph.hpp"
#include "urtu/params.hpp"
#include "urtu/rng.hpp"
#include "urtu/types.hpp"

namespace fixtures {

using urtu::Arc;
using urtu::DirectedNetwork;
using urtu::Index;
using urtu::Matrix;
using urtu::UrtuParams;
using urtu::Vector;

inline DirectedNetwork single_node() { return DirectedNetwork(1, {}); }

inline DirectedNetwork ring2() {
  return DirectedNetwork(2, {{0, 1}, {1, 0}});
}

/// Directed cycle: node j sends to j+1, i.e. arcs (j+1 mod n, j).
inline DirectedNetwork directed_cycle(Index n) {
  std::vector<Arc> arcs;
  for (Index j = 0; j < n; ++j) arcs.push_back({(j + 1) % n, j});
  return DirectedNetwork(n, std::move(arcs));
}

inline DirectedNetwork complete_digraph(Index n) {
  std::vector<Arc> arcs;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j)
      if (i != j) arcs.push_back({i, j});
  return DirectedNetwork(n, std::move(arcs));
}

/// Symmetrized Erdos-Renyi-ish graph, regenerated until strongly connected.
inline DirectedNetwork random_connected(Index n, double edge_prob,
                                        std::uint64_t seed) {
  urtu::Rng rng(seed);
  for (int attempt = 0; attempt < 200; ++attempt) {
    std::vector<Arc> arcs;
    for (Index a = 0; a < n; ++a)
      for (Index b = a + 1; b < n; ++b)
        if (rng.uniform() < edge_prob) {
          arcs.push_back({a, b});
          arcs.push_back({b, a});
        }
    DirectedNetwork net(n, std::move(arcs));
    if (urtu::is_strongly_connected(net)) return net;
  }
  throw std::runtime_error("fixture: could not build a connected graph");
}

/// Constant rates on the arcs of the given networks.
inline UrtuParams homogeneous(const DirectedNetwork& gr,
                              const DirectedNetwork& gt, double beta_u,
                              double beta_t, double gamma_u, double gamma_r,
                              double delta_r, double delta_t) {
  const Index n = gr.node_count();
  UrtuParams p;
  p.beta_u = Matrix::Zero(n, n);
  p.beta_t = Matrix::Zero(n, n);
  p.gamma_u = Matrix::Zero(n, n);
  p.gamma_r = Matrix::Zero(n, n);
  for (const auto& [i, j] : gr.arcs()) {
    p.beta_u(i, j) = beta_u;
    p.beta_t(i, j) = beta_t;
  }
  for (const auto& [i, j] : gt.arcs()) {
    p.gamma_u(i, j) = gamma_u;
    p.gamma_r(i, j) = gamma_r;
  }
  p.delta_r = Vector::Constant(n, delta_r);
  p.delta_t = Vector::Constant(n, delta_t);
  return p;
}

inline UrtuParams single_node_params(double delta_r, double delta_t) {
  UrtuParams p;
  p.beta_u = Matrix::Zero(1, 1);
  p.beta_t = Matrix::Zero(1, 1);
  p.gamma_u = Matrix::Zero(1, 1);
  p.gamma_r = Matrix::Zero(1, 1);
  p.delta_r = Vector::Constant(1, delta_r);
  p.delta_t = Vector::Constant(1, delta_t);
  return p;
}

/// Swaps the rumor and truth roles: (beta_u, beta_t, delta_r) with
/// (gamma_u, gamma_r, delta_t).
inline UrtuParams swap_roles(const UrtuParams& p) {
  return UrtuParams{p.gamma_u, p.gamma_r, p.beta_u, p.beta_t, p.delta_t,
                    p.delta_r};
}

}  // namespace fixtures
