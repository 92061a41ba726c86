#include <doctest.h>

#include "omtl/errors.hpp"
#include "omtl/topology.hpp"

using namespace omtl;
using Adj = std::vector<std::vector<std::size_t>>;

TEST_CASE("ring neighbors") {
  const auto ring = Topology::ring(5);
  CHECK(ring.neighbors(0) == std::vector<std::size_t>{1, 4});
  CHECK(ring.neighbors(2) == std::vector<std::size_t>{1, 3});
  CHECK(ring.closed_neighborhood(0) == std::vector<std::size_t>{0, 1, 4});
  for (std::size_t k = 0; k < 5; ++k) CHECK(ring.degree(k) == 2);

  const auto two = Topology::ring(2);
  CHECK(two.neighbors(0) == std::vector<std::size_t>{1});
  CHECK(Topology::ring(1).degree(0) == 0);
}

TEST_CASE("full neighbors") {
  const auto full = Topology::full(4);
  CHECK(full.neighbors(2) == std::vector<std::size_t>{0, 1, 3});
  CHECK(full.closed_neighborhood(3) == std::vector<std::size_t>{0, 1, 2, 3});
}

TEST_CASE("star has no worker links") {
  const auto star = Topology::star(6);
  CHECK(star.kind() == TopologyKind::kStar);
  CHECK(star.degree(3) == 0);
  CHECK(diameter(star) == 2);
  CHECK(diameter(Topology::star(1)) == 0);
}

TEST_CASE("diameters") {
  CHECK(diameter(Topology::full(8)) == 1);
  CHECK(diameter(Topology::ring(5)) == 2);
  CHECK(diameter(Topology::ring(6)) == 3);
  CHECK(diameter(Topology::ring(2)) == 1);
  CHECK(diameter(Topology::full(1)) == 0);
  const Adj path{{1}, {0, 2}, {1, 3}, {2}};
  CHECK(diameter(Topology::custom(TopologyKind::kRing, path)) == 3);
}

TEST_CASE("disconnected graphs are rejected by diameter") {
  const Adj split{{1}, {0}, {3}, {2}};
  const auto topo = Topology::custom(TopologyKind::kRing, split);
  CHECK_THROWS_AS(diameter(topo), ConnectivityError);
}

TEST_CASE("custom adjacency validation") {
  CHECK_THROWS_AS(Topology::custom(TopologyKind::kRing, Adj{{1}, {}}), TopologyError);
  CHECK_THROWS_AS(Topology::custom(TopologyKind::kRing, Adj{{0}}), TopologyError);
  CHECK_THROWS_AS(Topology::custom(TopologyKind::kRing, Adj{{5}, {0}}), TopologyError);
  const auto t = Topology::custom(TopologyKind::kFull, Adj{{2, 1}, {0}, {0}});
  CHECK(t.neighbors(0) == std::vector<std::size_t>{1, 2});
}

TEST_CASE("topology names") {
  for (auto kind : {TopologyKind::kStar, TopologyKind::kRing, TopologyKind::kFull}) {
    CHECK(parse_topology_kind(to_string(kind)) == kind);
  }
  CHECK_THROWS_AS(parse_topology_kind("mesh"), ConfigError);
  CHECK_THROWS_AS(Topology::ring(0), TopologyError);
}
