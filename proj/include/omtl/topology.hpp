#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace omtl {

enum class TopologyKind { kStar, kRing, kFull };

std::string to_string(TopologyKind kind);
TopologyKind parse_topology_kind(std::string_view name);

// Worker graph. For a star the workers have no direct links; they talk to a
// distinct server node that is not part of `neighbors`.
class Topology {
 public:
  static Topology star(std::size_t K);
  static Topology ring(std::size_t K);
  static Topology full(std::size_t K);
  static Topology make(TopologyKind kind, std::size_t K);

  // Arbitrary adjacency, validated for symmetry and absence of self-loops.
  static Topology custom(TopologyKind kind, std::vector<std::vector<std::size_t>> adjacency);

  TopologyKind kind() const { return kind_; }
  std::size_t size() const { return adjacency_.size(); }

  // Sorted ascending, excluding k itself.
  const std::vector<std::size_t>& neighbors(std::size_t k) const { return adjacency_.at(k); }

  // N(k) together with k, sorted ascending.
  std::vector<std::size_t> closed_neighborhood(std::size_t k) const;

  std::size_t degree(std::size_t k) const { return adjacency_.at(k).size(); }

 private:
  Topology(TopologyKind kind, std::vector<std::vector<std::size_t>> adjacency);

  TopologyKind kind_;
  std::vector<std::vector<std::size_t>> adjacency_;
};

// Longest shortest path between two workers. A star routes through its server
// (2 hops for K > 1). Throws ConnectivityError if some pair is unreachable.
std::size_t diameter(const Topology& topo);

}  // namespace omtl
