#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

namespace saddle {

/// Undirected communication topology with 0/1 weights.
/// Immutable after construction; safe to share across readers.
struct CommGraph {
  int node_count = 0;
  Eigen::MatrixXd adjacency;                // N x N, symmetric, zero diagonal
  std::vector<std::vector<int>> neighbors;  // sorted adjacency lists

  int degree(int i) const { return static_cast<int>(neighbors[i].size()); }
};

// Builds a validated graph from an edge list. Throws std::invalid_argument on
// out-of-range indices, self-loops, duplicate edges, or a disconnected result.
CommGraph build_graph(const std::vector<std::pair<int, int>>& edges, int node_count);

// True iff breadth-first search from node 0 visits all nodes.
bool is_connected(const CommGraph& g);

}  // namespace saddle
