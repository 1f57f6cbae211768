#include "urtu/graph.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "urtu/errors.hpp"
#include "urtu/rng.hpp"

namespace urtu {

DirectedNetwork::DirectedNetwork(Index n, std::vector<Arc> arcs) : n_(n) {
  if (n < 1) throw ValidationError("network: node count must be >= 1");
  for (const auto& [i, j] : arcs) {
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ValidationError("network: arc index out of range");
    if (i == j) throw ValidationError("network: self-arc");
  }
  std::sort(arcs.begin(), arcs.end());
  arcs.erase(std::unique(arcs.begin(), arcs.end()), arcs.end());
  arcs_ = std::move(arcs);
  senders_.resize(n_);
  receivers_.resize(n_);
  for (const auto& [i, j] : arcs_) {
    senders_[i].push_back(j);
    receivers_[j].push_back(i);
  }
}

bool DirectedNetwork::has_arc(Index i, Index j) const {
  return std::binary_search(arcs_.begin(), arcs_.end(), Arc{i, j});
}

namespace {

std::vector<Arc> symmetrize(const std::set<std::pair<Index, Index>>& edges) {
  std::vector<Arc> arcs;
  arcs.reserve(2 * edges.size());
  for (const auto& [a, b] : edges) {
    arcs.emplace_back(a, b);
    arcs.emplace_back(b, a);
  }
  return arcs;
}

std::pair<Index, Index> norm_edge(Index a, Index b) {
  return a < b ? std::pair{a, b} : std::pair{b, a};
}

}  // namespace

DirectedNetwork generate_scale_free(Index n, Index m, std::uint64_t seed) {
  if (m < 1 || n < m + 1)
    throw ValidationError("scale-free: require n >= m+1 and m >= 1");
  Rng rng(seed);

  std::set<std::pair<Index, Index>> edges;
  std::vector<Index> stubs;  // one entry per edge endpoint, drives the
                             // degree-proportional target choice
  for (Index a = 0; a <= m; ++a)
    for (Index b = a + 1; b <= m; ++b) {
      edges.insert({a, b});
      stubs.push_back(a);
      stubs.push_back(b);
    }

  std::vector<Index> targets;
  for (Index v = m + 1; v < n; ++v) {
    targets.clear();
    while (static_cast<Index>(targets.size()) < m) {
      Index t = stubs[rng.below(stubs.size())];
      if (std::find(targets.begin(), targets.end(), t) == targets.end())
        targets.push_back(t);
    }
    for (Index t : targets) {
      edges.insert(norm_edge(v, t));
      stubs.push_back(v);
      stubs.push_back(t);
    }
  }
  return DirectedNetwork(n, symmetrize(edges));
}

DirectedNetwork generate_small_world(Index n, Index k, double p,
                                     std::uint64_t seed) {
  if (k < 2 || k % 2 != 0 || n <= k || p < 0.0 || p > 1.0)
    throw ValidationError(
        "small-world: require n > k >= 2, k even, 0 <= p <= 1");
  Rng rng(seed);

  constexpr int kMaxAttempts = 1000;
  for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
    std::set<std::pair<Index, Index>> edges;
    for (Index i = 0; i < n; ++i)
      for (Index d = 1; d <= k / 2; ++d) edges.insert(norm_edge(i, (i + d) % n));

    for (Index i = 0; i < n; ++i)
      for (Index d = 1; d <= k / 2; ++d) {
        if (rng.uniform() >= p) continue;
        const auto old_edge = norm_edge(i, (i + d) % n);
        if (!edges.count(old_edge)) continue;  // already rewired away
        // pick a fresh target; give up on this edge if the node is saturated
        Index t = -1;
        for (int tries = 0; tries < 64; ++tries) {
          Index cand = static_cast<Index>(rng.below(n));
          if (cand == i || edges.count(norm_edge(i, cand))) continue;
          t = cand;
          break;
        }
        if (t < 0) continue;
        edges.erase(old_edge);
        edges.insert(norm_edge(i, t));
      }

    DirectedNetwork net(n, symmetrize(edges));
    if (is_strongly_connected(net)) return net;
  }
  throw NumericError(
      "small-world: no strongly connected instance after 1000 attempts");
}

namespace {

// BFS along one adjacency direction; true if all nodes were reached.
bool covers_all(const DirectedNetwork& net, bool forward) {
  const Index n = net.node_count();
  std::vector<char> seen(n, 0);
  std::vector<Index> queue{0};
  seen[0] = 1;
  Index reached = 1;
  while (!queue.empty()) {
    Index v = queue.back();
    queue.pop_back();
    const auto& next = forward ? net.receivers(v) : net.senders(v);
    for (Index w : next)
      if (!seen[w]) {
        seen[w] = 1;
        ++reached;
        queue.push_back(w);
      }
  }
  return reached == n;
}

}  // namespace

bool is_strongly_connected(const DirectedNetwork& net) {
  if (net.node_count() == 1) return true;
  return covers_all(net, true) && covers_all(net, false);
}

DirectedNetwork load_edges(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open edge file: " + path);

  std::string line;
  int line_no = 0;
  Index n = -1;
  std::vector<Arc> arcs;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line.substr(first));
    if (n < 0) {
      std::string header;
      ls >> header;
      if (header.rfind("n=", 0) != 0)
        throw ParseError(path + ": line " + std::to_string(line_no) +
                         ": expected header n=<count>");
      try {
        n = std::stoll(header.substr(2));
      } catch (const std::exception&) {
        throw ParseError(path + ": line " + std::to_string(line_no) +
                         ": bad node count");
      }
      if (n < 1)
        throw ParseError(path + ": line " + std::to_string(line_no) +
                         ": node count must be >= 1");
      continue;
    }
    long long i = 0, j = 0;
    if (!(ls >> i >> j))
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": malformed arc line");
    std::string extra;
    if (ls >> extra)
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": trailing tokens");
    if (i < 0 || i >= n || j < 0 || j >= n)
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": node index out of range");
    if (i == j)
      throw ParseError(path + ": line " + std::to_string(line_no) +
                       ": self-arc");
    arcs.emplace_back(i, j);
  }
  if (n < 0) throw ParseError(path + ": missing header n=<count>");
  return DirectedNetwork(n, std::move(arcs));
}

void save_edges(const DirectedNetwork& net, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write edge file: " + path);
  out << "n=" << net.node_count() << "\n";
  for (const auto& [i, j] : net.arcs()) out << i << " " << j << "\n";
  if (!out) throw Error("write failed: " + path);
}

}  // namespace urtu
