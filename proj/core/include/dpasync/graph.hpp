#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include "dpasync/rng.hpp"

namespace dpasync {

/// Undirected connected graph over nodes 0..N-1 with a prescribed
/// connectivity ratio c = |E| / (N(N-1)/2). Immutable after construction.
struct NetworkTopology {
  int n_nodes = 0;
  double connectivity = 0.0;
  std::vector<std::pair<int, int>> edges;  // canonical (m, n) with m < n, sorted
  std::vector<int> degrees;
  std::vector<std::vector<int>> adjacency;  // sorted neighbor lists

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_edge(int m, int n) const;
};

/// Number of edges implied by a connectivity ratio: round(c * N(N-1)/2).
long long edge_budget(int n_nodes, double connectivity);

/// Smallest feasible connectivity for n_nodes (spanning tree budget).
double min_connectivity(int n_nodes);

/// Builds a connected graph with exactly edge_budget(n, c) edges: a uniform
/// random spanning tree (Wilson's loop-erased walk on the complete graph)
/// plus uniformly sampled extra edges. Deterministic given the stream.
/// Throws std::invalid_argument when the edge budget is below N-1.
NetworkTopology generate_random_topology(int n_nodes, double connectivity, Rng& rng);

/// Graph Laplacian L = D - A. Rows sum to zero.
Eigen::MatrixXd laplacian(const NetworkTopology& topology);

/// Sorted neighbor ids of `node`. Throws std::out_of_range on a bad id.
const std::vector<int>& neighbors(const NetworkTopology& topology, int node);

/// True when every node is reachable from node 0.
bool is_connected(const NetworkTopology& topology);

/// Debug edge-list export: first line "N", then one "m n" line per edge.
void write_edge_list(const NetworkTopology& topology, std::ostream& out);

}  // namespace dpasync
