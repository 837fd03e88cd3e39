#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include <doctest.h>

#include "saddle/graph.hpp"
#include "saddle/rng.hpp"

using saddle::build_graph;
using saddle::CommGraph;
using saddle::is_connected;

namespace {
using EdgeList = std::vector<std::pair<int, int>>;
}

TEST_CASE("five-node ring builds with symmetric 0/1 adjacency") {
  const CommGraph g = build_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}, 5);
  CHECK(g.node_count == 5);
  CHECK(g.adjacency.rows() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(g.adjacency(i, i) == 0.0);
    CHECK(g.degree(i) == 2);
    for (int j = 0; j < 5; ++j) {
      CHECK(g.adjacency(i, j) == g.adjacency(j, i));
      const bool entry = g.adjacency(i, j) != 0.0;
      if (entry) CHECK(g.adjacency(i, j) == 1.0);
    }
  }
  CHECK(g.neighbors[0] == std::vector<int>{1, 4});
  CHECK(g.neighbors[3] == std::vector<int>{2, 4});
  CHECK(is_connected(g));
}

TEST_CASE("two-node line and singleton") {
  const CommGraph line = build_graph({{0, 1}}, 2);
  CHECK(line.degree(0) == 1);
  CHECK(line.degree(1) == 1);
  CHECK(is_connected(line));

  const CommGraph single = build_graph({}, 1);
  CHECK(single.degree(0) == 0);
  CHECK(is_connected(single));
}

TEST_CASE("edge order and orientation do not change the graph") {
  const CommGraph a = build_graph({{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}}, 5);
  const CommGraph b = build_graph({{4, 0}, {3, 2}, {1, 0}, {4, 3}, {2, 1}}, 5);
  CHECK(a.adjacency == b.adjacency);
  for (int i = 0; i < 5; ++i) CHECK(a.neighbors[i] == b.neighbors[i]);
}

TEST_CASE("construction rejects malformed graphs") {
  CHECK_THROWS_AS(build_graph({}, 0), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 5}}, 5), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{-1, 0}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{2, 2}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 1}, {1, 0}}, 2), std::invalid_argument);
  CHECK_THROWS_AS(build_graph({{0, 1}, {0, 1}}, 2), std::invalid_argument);
  // Disconnected: two separate pairs.
  CHECK_THROWS_AS(build_graph({{0, 1}, {2, 3}}, 4), std::invalid_argument);
  // Isolated node with otherwise valid edges.
  CHECK_THROWS_AS(build_graph({{0, 1}}, 3), std::invalid_argument);
}

TEST_CASE("random spanning trees plus chords stay symmetric and connected") {
  saddle::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform(0.0, 9.0));
    EdgeList edges;
    // Random spanning tree: attach each node to an earlier one.
    for (int v = 1; v < n; ++v) {
      const int parent = static_cast<int>(rng.uniform(0.0, static_cast<double>(v)));
      edges.emplace_back(parent, v);
    }
    // A few extra chords, skipping duplicates.
    for (int extra = 0; extra < n; ++extra) {
      const int a = static_cast<int>(rng.uniform(0.0, static_cast<double>(n)));
      const int b = static_cast<int>(rng.uniform(0.0, static_cast<double>(n)));
      if (a == b) continue;
      const auto lo = std::min(a, b), hi = std::max(a, b);
      const bool dup = std::any_of(edges.begin(), edges.end(), [&](const auto& e) {
        return (std::min(e.first, e.second) == lo && std::max(e.first, e.second) == hi);
      });
      if (!dup) edges.emplace_back(lo, hi);
    }
    const CommGraph g = build_graph(edges, n);
    CHECK(is_connected(g));
    CHECK(g.adjacency.transpose() == g.adjacency);
    int degree_sum = 0;
    for (int i = 0; i < n; ++i) degree_sum += g.degree(i);
    CHECK(degree_sum == 2 * static_cast<int>(edges.size()));
  }
}
