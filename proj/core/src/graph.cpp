#include "dpasync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace dpasync {

bool NetworkTopology::has_edge(int m, int n) const {
  if (m > n) std::swap(m, n);
  return std::binary_search(edges.begin(), edges.end(), std::make_pair(m, n));
}

long long edge_budget(int n_nodes, double connectivity) {
  const double all_pairs = 0.5 * static_cast<double>(n_nodes) * (n_nodes - 1);
  return std::llround(connectivity * all_pairs);
}

double min_connectivity(int n_nodes) {
  if (n_nodes < 2) return 0.0;
  return 2.0 / static_cast<double>(n_nodes);
}

namespace {

// Wilson's algorithm on the complete graph: loop-erased random walks from
// every node not yet in the tree. Uniform over all labeled spanning trees.
std::vector<std::pair<int, int>> uniform_spanning_tree(int n, Rng& rng) {
  std::vector<std::pair<int, int>> tree;
  if (n < 2) return tree;
  tree.reserve(n - 1);
  std::vector<bool> in_tree(n, false);
  std::vector<int> next(n, -1);
  in_tree[0] = true;
  for (int start = 1; start < n; ++start) {
    if (in_tree[start]) continue;
    int u = start;
    while (!in_tree[u]) {
      int v = static_cast<int>(rng.below(static_cast<std::uint64_t>(n - 1)));
      if (v >= u) ++v;  // uniform over the other n-1 nodes
      next[u] = v;
      u = v;
    }
    u = start;
    while (!in_tree[u]) {
      in_tree[u] = true;
      tree.emplace_back(std::min(u, next[u]), std::max(u, next[u]));
      u = next[u];
    }
  }
  return tree;
}

}  // namespace

NetworkTopology generate_random_topology(int n_nodes, double connectivity, Rng& rng) {
  if (n_nodes < 1) throw std::invalid_argument("n_nodes must be positive");
  if (!(connectivity >= 0.0) || connectivity > 1.0)
    throw std::invalid_argument("connectivity must lie in [0, 1]");

  const long long budget = edge_budget(n_nodes, connectivity);
  if (budget < n_nodes - 1) {
    std::ostringstream msg;
    msg << "edge budget " << budget << " below spanning-tree minimum " << (n_nodes - 1)
        << " for N=" << n_nodes << ", c=" << connectivity
        << " (minimum feasible connectivity is " << min_connectivity(n_nodes) << ")";
    throw std::invalid_argument(msg.str());
  }

  NetworkTopology topo;
  topo.n_nodes = n_nodes;
  topo.connectivity = connectivity;
  topo.edges = uniform_spanning_tree(n_nodes, rng);
  std::sort(topo.edges.begin(), topo.edges.end());

  // Fill the remaining budget with a uniform sample of non-tree pairs
  // (partial Fisher-Yates over the complement).
  const long long extra = budget - static_cast<long long>(topo.edges.size());
  if (extra > 0) {
    std::vector<std::pair<int, int>> pool;
    pool.reserve(static_cast<std::size_t>(n_nodes) * (n_nodes - 1) / 2);
    for (int m = 0; m < n_nodes; ++m)
      for (int n = m + 1; n < n_nodes; ++n)
        if (!topo.has_edge(m, n)) pool.emplace_back(m, n);
    for (long long i = 0; i < extra; ++i) {
      const auto j = i + static_cast<long long>(rng.below(pool.size() - i));
      std::swap(pool[i], pool[j]);
      topo.edges.push_back(pool[i]);
    }
    std::sort(topo.edges.begin(), topo.edges.end());
  }

  topo.degrees.assign(n_nodes, 0);
  topo.adjacency.assign(n_nodes, {});
  for (const auto& [m, n] : topo.edges) {
    ++topo.degrees[m];
    ++topo.degrees[n];
    topo.adjacency[m].push_back(n);
    topo.adjacency[n].push_back(m);
  }
  for (auto& nbrs : topo.adjacency) std::sort(nbrs.begin(), nbrs.end());
  return topo;
}

Eigen::MatrixXd laplacian(const NetworkTopology& topology) {
  const int n = topology.n_nodes;
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& [m, k] : topology.edges) {
    lap(m, k) -= 1.0;
    lap(k, m) -= 1.0;
    lap(m, m) += 1.0;
    lap(k, k) += 1.0;
  }
  return lap;
}

const std::vector<int>& neighbors(const NetworkTopology& topology, int node) {
  if (node < 0 || node >= topology.n_nodes)
    throw std::out_of_range("node id out of range");
  return topology.adjacency[node];
}

bool is_connected(const NetworkTopology& topology) {
  const int n = topology.n_nodes;
  if (n == 0) return false;
  std::vector<bool> seen(n, false);
  std::vector<int> stack{0};
  seen[0] = true;
  int visited = 1;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (int v : topology.adjacency[u]) {
      if (!seen[v]) {
        seen[v] = true;
        ++visited;
        stack.push_back(v);
      }
    }
  }
  return visited == n;
}

void write_edge_list(const NetworkTopology& topology, std::ostream& out) {
  out << topology.n_nodes << '\n';
  for (const auto& [m, n] : topology.edges) out << m << ' ' << n << '\n';
}

}  // namespace dpasync
