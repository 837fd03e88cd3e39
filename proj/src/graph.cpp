#include "saddle/graph.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>
#include <string>

namespace saddle {

CommGraph build_graph(const std::vector<std::pair<int, int>>& edges, int node_count) {
  if (node_count <= 0) {
    throw std::invalid_argument("graph: node_count must be positive");
  }
  CommGraph g;
  g.node_count = node_count;
  g.adjacency = Eigen::MatrixXd::Zero(node_count, node_count);
  g.neighbors.assign(node_count, {});

  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= node_count || b < 0 || b >= node_count) {
      throw std::invalid_argument("graph: edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ") out of range");
    }
    if (a == b) {
      throw std::invalid_argument("graph: self-loop at node " + std::to_string(a));
    }
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second) {
      throw std::invalid_argument("graph: duplicate edge (" + std::to_string(a) + "," +
                                  std::to_string(b) + ")");
    }
    g.adjacency(a, b) = 1.0;
    g.adjacency(b, a) = 1.0;
    g.neighbors[a].push_back(b);
    g.neighbors[b].push_back(a);
  }
  for (auto& nb : g.neighbors) std::sort(nb.begin(), nb.end());

  if (!is_connected(g)) {
    throw std::invalid_argument("graph: disconnected (Assumption 1 violated)");
  }
  return g;
}

bool is_connected(const CommGraph& g) {
  if (g.node_count <= 1) return true;
  std::vector<char> visited(g.node_count, 0);
  std::deque<int> queue{0};
  visited[0] = 1;
  int reached = 1;
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int v : g.neighbors[u]) {
      if (!visited[v]) {
        visited[v] = 1;
        ++reached;
        queue.push_back(v);
      }
    }
  }
  return reached == g.node_count;
}

}  // namespace saddle
