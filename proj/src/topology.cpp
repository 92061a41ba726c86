#include "omtl/topology.hpp"

#include <algorithm>
#include <deque>
#include <limits>

#include "omtl/errors.hpp"

namespace omtl {

std::string to_string(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kStar: return "star";
    case TopologyKind::kRing: return "ring";
    case TopologyKind::kFull: return "full";
  }
  return "unknown";
}

TopologyKind parse_topology_kind(std::string_view name) {
  if (name == "star") return TopologyKind::kStar;
  if (name == "ring") return TopologyKind::kRing;
  if (name == "full") return TopologyKind::kFull;
  throw ConfigError("unknown topology '" + std::string(name) + "'");
}

Topology::Topology(TopologyKind kind, std::vector<std::vector<std::size_t>> adjacency)
    : kind_(kind), adjacency_(std::move(adjacency)) {
  const std::size_t K = adjacency_.size();
  if (K == 0) throw TopologyError("topology needs at least one worker");
  for (std::size_t i = 0; i < K; ++i) {
    auto& nb = adjacency_[i];
    std::sort(nb.begin(), nb.end());
    nb.erase(std::unique(nb.begin(), nb.end()), nb.end());
    for (std::size_t j : nb) {
      if (j >= K) throw TopologyError("neighbor index out of range");
      if (j == i) throw TopologyError("self-loop at worker " + std::to_string(i));
    }
  }
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j : adjacency_[i]) {
      if (!std::binary_search(adjacency_[j].begin(), adjacency_[j].end(), i)) {
        throw TopologyError("adjacency is not symmetric between " + std::to_string(i) +
                            " and " + std::to_string(j));
      }
    }
  }
}

Topology Topology::star(std::size_t K) {
  return Topology(TopologyKind::kStar, std::vector<std::vector<std::size_t>>(K));
}

Topology Topology::ring(std::size_t K) {
  std::vector<std::vector<std::size_t>> adj(K);
  for (std::size_t i = 0; i < K && K > 1; ++i) {
    for (std::size_t j : {(i + K - 1) % K, (i + 1) % K}) {
      if (j != i) adj[i].push_back(j);
    }
  }
  return Topology(TopologyKind::kRing, std::move(adj));
}

Topology Topology::full(std::size_t K) {
  std::vector<std::vector<std::size_t>> adj(K);
  for (std::size_t i = 0; i < K; ++i) {
    for (std::size_t j = 0; j < K; ++j) {
      if (j != i) adj[i].push_back(j);
    }
  }
  return Topology(TopologyKind::kFull, std::move(adj));
}

Topology Topology::make(TopologyKind kind, std::size_t K) {
  switch (kind) {
    case TopologyKind::kStar: return star(K);
    case TopologyKind::kRing: return ring(K);
    case TopologyKind::kFull: return full(K);
  }
  throw TopologyError("unknown topology kind");
}

Topology Topology::custom(TopologyKind kind, std::vector<std::vector<std::size_t>> adjacency) {
  return Topology(kind, std::move(adjacency));
}

std::vector<std::size_t> Topology::closed_neighborhood(std::size_t k) const {
  std::vector<std::size_t> out = neighbors(k);
  out.insert(std::upper_bound(out.begin(), out.end(), k), k);
  return out;
}

std::size_t diameter(const Topology& topo) {
  const std::size_t K = topo.size();
  if (topo.kind() == TopologyKind::kStar) return K > 1 ? 2 : 0;
  constexpr auto kUnseen = std::numeric_limits<std::size_t>::max();
  std::size_t best = 0;
  for (std::size_t src = 0; src < K; ++src) {
    std::vector<std::size_t> dist(K, kUnseen);
    std::deque<std::size_t> queue{src};
    dist[src] = 0;
    while (!queue.empty()) {
      const std::size_t at = queue.front();
      queue.pop_front();
      for (std::size_t nb : topo.neighbors(at)) {
        if (dist[nb] == kUnseen) {
          dist[nb] = dist[at] + 1;
          queue.push_back(nb);
        }
      }
    }
    for (std::size_t k = 0; k < K; ++k) {
      if (dist[k] == kUnseen) {
        throw ConnectivityError("worker " + std::to_string(k) + " unreachable from " +
                                std::to_string(src));
      }
      best = std::max(best, dist[k]);
    }
  }
  return best;
}

}  // namespace omtl
