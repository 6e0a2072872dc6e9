#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dpasync/mpac.hpp"
#include "test_util.hpp"

using namespace dpasync;

namespace {

NetworkTopology two_node_path() {
  Rng rng(1);
  return generate_random_topology(2, 1.0, rng);
}

std::vector<Observation> constant_obs(int n, double f, double th) {
  return std::vector<Observation>(n, Observation{f, th});
}

}  // namespace

TEST_CASE("f_gamma basics") {
  CHECK(f_gamma(0.0, 1e12) == 0.0);
  CHECK(f_gamma(1e12, 1e12) == doctest::Approx(5e11));
  CHECK(f_gamma(1.0, 1e12) == doctest::Approx(1.0 / (1.0 + 1e-12)).epsilon(1e-15));

  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const double gamma = std::pow(10.0, rng.uniform(0.0, 14.0));
    const double x = std::pow(10.0, rng.uniform(-6.0, 14.0));
    const double y = f_gamma(x, gamma);
    CHECK(y >= 0.0);
    CHECK(y < gamma);
    CHECK(y <= x * (1.0 + 1e-15) + 1e-300);
  }
}

TEST_CASE("init_mpac seeds every directed edge with (f_init, pi, f_gamma(w))") {
  Rng rng(4);
  const auto topo = generate_random_topology(7, 0.6, rng);
  const auto config = MpacConfig::uniform(7, 1e12);
  const auto state = init_mpac(topo, config, 0.0);

  CHECK(state.directed_edge_count() == 2 * topo.edge_count());
  for (const auto& msg : state.messages) {
    CHECK(msg.mu_f == 0.0);
    CHECK(msg.mu_theta == doctest::Approx(std::numbers::pi));
    CHECK(msg.scale == doctest::Approx(f_gamma(1.0, 1e12)).epsilon(1e-15));
    CHECK(msg.scale < config.gamma);
  }
  CHECK(state.iteration == 0);

  const auto tiny = init_mpac(two_node_path(), MpacConfig::uniform(2), 0.0);
  CHECK(tiny.directed_edge_count() == 2);
}

TEST_CASE("init_mpac rejects invalid configs") {
  const auto topo = two_node_path();
  CHECK_THROWS_AS(init_mpac(topo, MpacConfig{1e12, {1.0, 0.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(init_mpac(topo, MpacConfig{0.0, {1.0, 1.0}}, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(init_mpac(topo, MpacConfig{1e12, {1.0}}, 0.0), std::invalid_argument);
}

TEST_CASE("update_node averages the inbox with the fresh observation") {
  const auto topo = two_node_path();
  const auto config = MpacConfig::uniform(2, 1e12);
  const double f_c = 0.0;  // carrier-relative initialization
  auto state = init_mpac(topo, config, f_c);

  // first iteration: incoming message is (f_c, pi, ~1), so the update is the
  // midpoint of the observation and the initial coarse average
  const Observation obs{250.0, 1.0};
  const auto upd = update_node(0, obs, state, config);
  CHECK(upd.freq == doctest::Approx((obs.freq + f_c) / 2.0).epsilon(1e-12));
  CHECK(upd.phase == doctest::Approx((obs.phase + std::numbers::pi) / 2.0).epsilon(1e-12));
}

TEST_CASE("update_node on identical inbox and observation is a fixed value") {
  Rng rng(6);
  const auto topo = generate_random_topology(6, 0.8, rng);
  const auto config = MpacConfig::uniform(6, 1e9);
  auto state = init_mpac(topo, config, 0.0);
  for (auto& msg : state.messages) {
    msg.mu_f = 77.0;
    msg.mu_theta = 1.25;
    msg.scale = 0.4;
  }
  const auto upd = update_node(3, Observation{77.0, 1.25}, state, config);
  CHECK(upd.freq == doctest::Approx(77.0).epsilon(1e-14));
  CHECK(upd.phase == doctest::Approx(1.25).epsilon(1e-14));
}

TEST_CASE("update_node with an empty inbox returns the observation") {
  // degenerate isolated node, only reachable in hand-built topologies
  NetworkTopology topo;
  topo.n_nodes = 3;
  topo.connectivity = 0.0;
  topo.edges = {{0, 1}};
  topo.degrees = {1, 1, 0};
  topo.adjacency = {{1}, {0}, {}};
  const auto config = MpacConfig::uniform(3);
  const auto state = init_mpac(topo, config, 0.0);
  const auto upd = update_node(2, Observation{42.0, 0.5}, state, config);
  CHECK(upd.freq == 42.0);
  CHECK(upd.phase == 0.5);
}

TEST_CASE("compute_outgoing excludes the recipient") {
  const auto topo = two_node_path();
  const auto config = MpacConfig::uniform(2, 1e12);
  const auto state = init_mpac(topo, config, 0.0);

  // the exclusion empties the sum on a 2-node graph
  const Observation obs{123.0, 2.0};
  const auto msg = compute_outgoing(0, 1, obs, state, config);
  CHECK(msg.mu_f == obs.freq);
  CHECK(msg.mu_theta == obs.phase);
  CHECK(msg.scale == doctest::Approx(f_gamma(1.0, 1e12)).epsilon(1e-15));

  CHECK_THROWS_AS(compute_outgoing(0, 0, obs, state, config), std::invalid_argument);
}

TEST_CASE("leaf in a star sends only its own observation toward the hub") {
  Rng rng(9);
  NetworkTopology star;
  star.n_nodes = 5;
  star.connectivity = 0.4;
  star.edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
  star.degrees = {4, 1, 1, 1, 1};
  star.adjacency = {{1, 2, 3, 4}, {0}, {0}, {0}, {0}};
  const auto config = MpacConfig::uniform(5);
  const auto state = init_mpac(star, config, 0.0);
  const auto msg = compute_outgoing(3, 0, Observation{-55.0, 0.125}, state, config);
  CHECK(msg.mu_f == -55.0);
  CHECK(msg.mu_theta == 0.125);
}

TEST_CASE("outgoing scales stay strictly below gamma") {
  Rng rng(10);
  const auto topo = generate_random_topology(9, 0.7, rng);
  const auto config = MpacConfig::uniform(9, 1e6);
  auto state = init_mpac(topo, config, 0.0);
  auto obs = constant_obs(9, 10.0, 1.0);
  for (int k = 0; k < 200; ++k) {
    state = mpac_iteration(state, obs, config);
    for (const auto& msg : state.messages) {
      CHECK(msg.scale > 0.0);
      CHECK(msg.scale < config.gamma);
      CHECK(std::isfinite(msg.mu_f));
      CHECK(std::isfinite(msg.mu_theta));
    }
  }
}

TEST_CASE("consensus already reached is a fixed point of the iteration") {
  Rng rng(12);
  const auto topo = generate_random_topology(8, 0.5, rng);
  const auto config = MpacConfig::uniform(8, 1e12);
  auto state = init_mpac(topo, config, 0.0);
  // observations equal to the message initialization (f_init=0, pi)
  const auto obs = constant_obs(8, 0.0, std::numbers::pi);
  auto next = mpac_iteration(state, obs, config);
  for (int k = 0; k < 5; ++k) {
    for (int i = 0; i < 8; ++i) {
      CHECK(next.consensus_freq[i] == 0.0);
      CHECK(next.consensus_phase[i] == doctest::Approx(std::numbers::pi).epsilon(1e-15));
    }
    next = mpac_iteration(next, obs, config);
  }
}

TEST_CASE("2-node static values average in two iterations") {
  const auto topo = two_node_path();
  const auto config = MpacConfig::uniform(2, 1e12);
  auto state = init_mpac(topo, config, 0.0);
  const double a = 150.0, b = -30.0;
  const std::vector<Observation> obs{{a, 0.5}, {b, 2.5}};
  state = mpac_iteration(state, obs, config);
  state = mpac_iteration(state, obs, config);
  const double tol = 1e-11 * std::abs(a - b);
  CHECK(std::abs(state.consensus_freq[0] - (a + b) / 2) < tol);
  CHECK(std::abs(state.consensus_freq[1] - (a + b) / 2) < tol);
  CHECK(std::abs(state.consensus_phase[0] - 1.5) < 1e-11 * 2.0);
}

TEST_CASE("one round recomputes exactly 2|E| messages and bumps the iteration") {
  Rng rng(14);
  const auto topo = generate_random_topology(10, 0.4, rng);
  const auto config = MpacConfig::uniform(10);
  auto state = init_mpac(topo, config, 0.0);
  const auto next = mpac_iteration(state, constant_obs(10, 1.0, 1.0), config);
  CHECK(next.directed_edge_count() == 2 * topo.edge_count());
  CHECK(next.iteration == 1);
  CHECK(mpac_iteration(next, constant_obs(10, 1.0, 1.0), config).iteration == 2);
}

TEST_CASE("node processing order cannot change a synchronous round") {
  Rng rng(15);
  const auto topo = generate_random_topology(9, 0.5, rng);
  const auto config = MpacConfig::uniform(9);
  auto state = init_mpac(topo, config, 0.0);
  std::vector<Observation> obs(9);
  for (int i = 0; i < 9; ++i) obs[i] = {rng.normal(0, 100), rng.uniform(0, 6.28)};
  state = mpac_iteration(state, obs, config);

  // update_node reads only the previous round; forward and reverse sweeps agree
  std::vector<Observation> forward(9), reverse(9);
  for (int i = 0; i < 9; ++i) forward[i] = update_node(i, obs[i], state, config);
  for (int i = 8; i >= 0; --i) reverse[i] = update_node(i, obs[i], state, config);
  for (int i = 0; i < 9; ++i) {
    CHECK(forward[i].freq == reverse[i].freq);
    CHECK(forward[i].phase == reverse[i].phase);
  }
}

TEST_CASE("static consensus stays within the observation envelope") {
  Rng rng(16);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 4 + static_cast<int>(rng.below(6));
    const auto topo = generate_random_topology(n, rng.uniform(min_connectivity(n), 1.0), rng);
    const auto config = MpacConfig::uniform(n, 1e3);
    std::vector<Observation> obs(n);
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < n; ++i) {
      obs[i] = {rng.normal(0, 1e5), rng.uniform(0, 6.28)};
      lo = std::min(lo, obs[i].freq);
      hi = std::max(hi, obs[i].freq);
    }
    auto state = init_mpac(topo, config, 0.0);
    for (int k = 0; k < 400; ++k) state = mpac_iteration(state, obs, config);
    // convex-combination property, with slack for the pi message transient
    for (int i = 0; i < n; ++i) {
      CHECK(state.consensus_freq[i] >= lo - 1e-6 * (hi - lo));
      CHECK(state.consensus_freq[i] <= hi + 1e-6 * (hi - lo));
    }
  }
}

TEST_CASE("scales reach a fixed point on static runs") {
  Rng rng(18);
  const int n = 7;
  const auto topo = generate_random_topology(n, min_connectivity(n), rng);  // tree
  const auto config = MpacConfig::uniform(n, 1e12);
  auto state = init_mpac(topo, config, 0.0);
  const auto obs = constant_obs(n, 3.0, 1.0);
  for (int k = 0; k < 3 * n; ++k) state = mpac_iteration(state, obs, config);
  const auto frozen = state.messages;
  state = mpac_iteration(state, obs, config);
  for (std::size_t e = 0; e < frozen.size(); ++e)
    CHECK(std::abs(state.messages[e].scale - frozen[e].scale) <= 1e-12 * frozen[e].scale);
}

TEST_CASE("fixed point matches the closed form: trees tight, loopy graphs close") {
  Rng rng(21);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = 3 + static_cast<int>(rng.below(8));
    const bool tree = rep % 2 == 0;
    const double c = tree ? min_connectivity(n) : rng.uniform(0.6, 0.95);
    const auto topo = generate_random_topology(n, c, rng);
    const bool is_tree = topo.edge_count() == n - 1;
    const double gamma = is_tree ? 1e12 : 1e3;
    const auto config = MpacConfig::uniform(n, gamma);

    std::vector<Observation> obs(n);
    Eigen::VectorXd zf(n), zt(n);
    for (int i = 0; i < n; ++i) {
      obs[i] = {rng.normal(0, 1e5), rng.uniform(0, 6.28)};
      zf[i] = obs[i].freq;
      zt[i] = obs[i].phase;
    }

    const auto fp = testutil::run_to_fixed_point(topo, config, obs);
    REQUIRE(fp.settled);
    const auto xf = testutil::oracle_consensus(topo, gamma, zf);
    const auto xt = testutil::oracle_consensus(topo, gamma, zt);
    const double tol = is_tree ? 1e-9 : 1e-6;
    CHECK(testutil::max_rel_error(fp.freq, xf) < tol);
    CHECK(testutil::max_rel_error(fp.phase, xt) < tol);
  }
}

TEST_CASE("message_from finds the directed inbox entry") {
  const auto topo = two_node_path();
  const auto state = init_mpac(topo, MpacConfig::uniform(2), 0.0);
  CHECK(state.message_from(0, 1).mu_theta == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(state.message_from(1, 1), std::out_of_range);
}
