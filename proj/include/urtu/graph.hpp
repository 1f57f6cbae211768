#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "urtu/types.hpp"

namespace urtu {

/// Directed arc (i, j): node j can send to node i.
using Arc = std::pair<Index, Index>;

/// Node set plus directed arc set. Arcs are kept sorted lexicographically,
/// deduplicated, with no self-arcs. Immutable after construction; safe to
/// share read-only across threads.
class DirectedNetwork {
 public:
  DirectedNetwork() = default;
  DirectedNetwork(Index n, std::vector<Arc> arcs);

  Index node_count() const { return n_; }
  Index arc_count() const { return static_cast<Index>(arcs_.size()); }
  const std::vector<Arc>& arcs() const { return arcs_; }

  /// Nodes j that can send to i, i.e. {j : (i, j) in arcs}.
  const std::vector<Index>& senders(Index i) const { return senders_[i]; }
  /// Nodes i that j can send to, i.e. {i : (i, j) in arcs}.
  const std::vector<Index>& receivers(Index j) const { return receivers_[j]; }

  bool has_arc(Index i, Index j) const;

  bool operator==(const DirectedNetwork& other) const {
    return n_ == other.n_ && arcs_ == other.arcs_;
  }

 private:
  Index n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<Index>> senders_;
  std::vector<std::vector<Index>> receivers_;
};

/// Barabasi-Albert preferential attachment on an initial clique of m+1
/// nodes; every undirected edge becomes two opposing arcs.
DirectedNetwork generate_scale_free(Index n, Index m, std::uint64_t seed);

/// Watts-Strogatz ring rewiring, symmetrized to arcs. Rewiring is retried
/// from fresh randomness until the result is strongly connected.
DirectedNetwork generate_small_world(Index n, Index k, double p,
                                     std::uint64_t seed);

bool is_strongly_connected(const DirectedNetwork& net);

/// Edge-list file: header line "n=<count>", then one "i j" arc per line.
/// Lines starting with '#' are skipped on load; save emits the canonical
/// sorted form without comments.
DirectedNetwork load_edges(const std::string& path);
void save_edges(const DirectedNetwork& net, const std::string& path);

}  // namespace urtu
