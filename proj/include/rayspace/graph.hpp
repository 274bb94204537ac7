#pragma once

// Weighted undirected graphs over points of a lattice and A* search on them.

#include <Eigen/Dense>

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <utility>
#include <vector>

#include "rayspace/error.hpp"

namespace rayspace {

struct PlanGraph {
  std::vector<Eigen::VectorXd> points;
  std::vector<std::vector<std::pair<int, double>>> adjacency;  // (node, cost)

  int size() const { return static_cast<int>(points.size()); }

  int add_node(Eigen::VectorXd p) {
    points.push_back(std::move(p));
    adjacency.emplace_back();
    return size() - 1;
  }
  void add_edge(int a, int b) {
    const double c = (points[static_cast<std::size_t>(a)] - points[static_cast<std::size_t>(b)]).norm();
    adjacency[static_cast<std::size_t>(a)].push_back({b, c});
    adjacency[static_cast<std::size_t>(b)].push_back({a, c});
  }
  std::size_t edge_count() const {
    std::size_t e = 0;
    for (const auto& a : adjacency) e += a.size();
    return e / 2;
  }
  double edge_cost(int a, int b) const {
    for (const auto& [n, c] : adjacency.at(static_cast<std::size_t>(a))) {
      if (n == b) return c;
    }
    throw Error(ErrorCode::invalid_argument, "nodes are not adjacent");
  }
};

struct PlanResult {
  std::vector<int> nodes;
  double cost = 0.0;
};

// Sum of edge costs along a node sequence, added in ascending order.
inline double path_cost(const PlanGraph& g, const std::vector<int>& nodes) {
  std::vector<double> costs;
  for (std::size_t k = 1; k < nodes.size(); ++k) costs.push_back(g.edge_cost(nodes[k - 1], nodes[k]));
  std::sort(costs.begin(), costs.end());
  double total = 0.0;
  for (double c : costs) total += c;
  return total;
}

// A* with the straight-line distance to the goal as heuristic.
inline PlanResult plan(const PlanGraph& g, int start, int goal) {
  const int n = g.size();
  if (start < 0 || start >= n || goal < 0 || goal >= n) {
    throw Error(ErrorCode::bad_index, "start or goal is not a graph node");
  }
  const auto& target = g.points[static_cast<std::size_t>(goal)];
  auto h = [&](int v) { return (g.points[static_cast<std::size_t>(v)] - target).norm(); };

  std::vector<double> best(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
  std::vector<int> parent(static_cast<std::size_t>(n), -1);
  std::vector<bool> closed(static_cast<std::size_t>(n), false);
  using Entry = std::pair<double, int>;  // (f, node)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
  best[static_cast<std::size_t>(start)] = 0.0;
  open.push({h(start), start});
  while (!open.empty()) {
    const int v = open.top().second;
    open.pop();
    if (closed[static_cast<std::size_t>(v)]) continue;
    closed[static_cast<std::size_t>(v)] = true;
    if (v == goal) break;
    for (const auto& [w, c] : g.adjacency[static_cast<std::size_t>(v)]) {
      if (closed[static_cast<std::size_t>(w)]) continue;
      const double cand = best[static_cast<std::size_t>(v)] + c;
      if (cand < best[static_cast<std::size_t>(w)]) {
        best[static_cast<std::size_t>(w)] = cand;
        parent[static_cast<std::size_t>(w)] = v;
        open.push({cand + h(w), w});
      }
    }
  }
  if (!closed[static_cast<std::size_t>(goal)]) throw Error(ErrorCode::no_path, "goal is unreachable");
  PlanResult r;
  for (int v = goal; v != -1; v = parent[static_cast<std::size_t>(v)]) r.nodes.push_back(v);
  std::reverse(r.nodes.begin(), r.nodes.end());
  r.cost = path_cost(g, r.nodes);
  return r;
}

}  // namespace rayspace
