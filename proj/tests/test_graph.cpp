#include <doctest.h>

#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <set>
#include <sstream>

#include "dpasync/graph.hpp"

using namespace dpasync;

TEST_CASE("edge budget follows round(c * N(N-1)/2)") {
  CHECK(edge_budget(5, 0.4) == 4);
  CHECK(edge_budget(2, 1.0) == 1);
  CHECK(edge_budget(20, 0.2) == 38);
  CHECK(edge_budget(100, 0.05) == 248);
}

TEST_CASE("minimum connectivity example from a 5-node array") {
  CHECK(min_connectivity(5) == doctest::Approx(0.4));
}

TEST_CASE("N=5 c=0.4 yields a spanning tree") {
  Rng rng(11);
  const auto topo = generate_random_topology(5, 0.4, rng);
  CHECK(topo.edge_count() == 4);
  CHECK(is_connected(topo));
}

TEST_CASE("N=2 c=1 is the single edge") {
  Rng rng(1);
  const auto topo = generate_random_topology(2, 1.0, rng);
  REQUIRE(topo.edge_count() == 1);
  CHECK(topo.edges[0] == std::pair<int, int>{0, 1});
  CHECK(topo.degrees == std::vector<int>{1, 1});
}

TEST_CASE("N=20 c=0.2 has 38 edges and stays connected") {
  Rng rng(99);
  const auto topo = generate_random_topology(20, 0.2, rng);
  CHECK(topo.edge_count() == 38);
  CHECK(is_connected(topo));
}

TEST_CASE("infeasible edge budget is rejected with the minimum in the message") {
  Rng rng(3);
  CHECK_THROWS_WITH_AS(generate_random_topology(5, 0.1, rng),
                       doctest::Contains("0.4"), std::invalid_argument);
}

TEST_CASE("generated topologies satisfy the structural invariants") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(seed);
    const int n = 3 + static_cast<int>(rng.below(30));
    const double c_min = min_connectivity(n);
    const double c = rng.uniform(c_min, 1.0);
    const auto topo = generate_random_topology(n, c, rng);

    CHECK(topo.edge_count() == edge_budget(n, c));
    CHECK(is_connected(topo));

    std::set<std::pair<int, int>> unique(topo.edges.begin(), topo.edges.end());
    CHECK(unique.size() == topo.edges.size());
    int degree_sum = 0;
    for (const auto& [m, k] : topo.edges) {
      CHECK(m < k);  // no self loops, canonical order
      CHECK(m >= 0);
      CHECK(k < n);
    }
    for (int node = 0; node < n; ++node) {
      CHECK(topo.degrees[node] == static_cast<int>(topo.adjacency[node].size()));
      degree_sum += topo.degrees[node];
    }
    CHECK(degree_sum == 2 * topo.edge_count());
  }
}

TEST_CASE("same seed reproduces the same edge set, different seed differs") {
  Rng a(42), b(42), c(43);
  const auto ta = generate_random_topology(15, 0.3, a);
  const auto tb = generate_random_topology(15, 0.3, b);
  const auto tc = generate_random_topology(15, 0.3, c);
  CHECK(ta.edges == tb.edges);
  CHECK(ta.edges != tc.edges);
}

TEST_CASE("laplacian of the 2-node path") {
  Rng rng(1);
  const auto topo = generate_random_topology(2, 1.0, rng);
  const auto lap = laplacian(topo);
  CHECK(lap(0, 0) == 1.0);
  CHECK(lap(0, 1) == -1.0);
  CHECK(lap(1, 0) == -1.0);
  CHECK(lap(1, 1) == 1.0);
}

TEST_CASE("laplacian of the triangle") {
  Rng rng(1);
  const auto topo = generate_random_topology(3, 1.0, rng);
  const auto lap = laplacian(topo);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(lap(i, j) == (i == j ? 2.0 : -1.0));
}

TEST_CASE("laplacian is symmetric PSD with L*1 = 0") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(seed);
    const int n = 3 + static_cast<int>(rng.below(8));
    const auto topo = generate_random_topology(n, rng.uniform(min_connectivity(n), 1.0), rng);
    const auto lap = laplacian(topo);
    CHECK((lap - lap.transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((lap * Eigen::VectorXd::Ones(n)).cwiseAbs().maxCoeff() == 0.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(lap);
    CHECK(eig.eigenvalues().minCoeff() > -1e-12);
    CHECK(std::abs(eig.eigenvalues()(0)) < 1e-12);  // smallest eigenvalue is 0
  }
}

TEST_CASE("neighbors are the sorted adjacent nodes") {
  Rng rng(1);
  const auto path = generate_random_topology(2, 1.0, rng);
  CHECK(neighbors(path, 0) == std::vector<int>{1});

  const auto triangle = generate_random_topology(3, 1.0, rng);
  CHECK(neighbors(triangle, 2) == std::vector<int>{0, 1});

  NetworkTopology star;  // hand-built 5-node star around node 0
  star.n_nodes = 5;
  star.connectivity = 0.4;
  star.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.degrees = {4, 1, 1, 1, 1};
  star.adjacency = {{1, 2, 3, 4}, {0}, {0}, {0}, {0}};
  CHECK(neighbors(star, 0).size() == 4);

  CHECK_THROWS_AS(neighbors(star, 5), std::out_of_range);
  CHECK_THROWS_AS(neighbors(star, -1), std::out_of_range);
}

TEST_CASE("edge list export starts with N and lists every edge") {
  Rng rng(8);
  const auto topo = generate_random_topology(6, 0.5, rng);
  std::ostringstream out;
  write_edge_list(topo, out);
  std::istringstream in(out.str());
  int n = 0;
  in >> n;
  CHECK(n == 6);
  int count = 0, a = 0, b = 0;
  while (in >> a >> b) {
    CHECK(topo.has_edge(a, b));
    ++count;
  }
  CHECK(count == topo.edge_count());
}
