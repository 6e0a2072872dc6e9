#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "dpasync/analysis.hpp"
#include "dpasync/baseline_dfpc.hpp"
#include "dpasync/experiment.hpp"

using namespace dpasync;

namespace {

NetworkTopology make_topology(int n, double c, std::uint64_t seed) {
  Rng rng(seed);
  return generate_random_topology(n, c, rng);
}

std::vector<Observation> make_observations(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Observation> obs(n);
  for (auto& o : obs) o = {rng.normal(0.0, 1e5), rng.uniform(0.0, 2 * std::numbers::pi)};
  return obs;
}

}  // namespace

static void BM_GenerateTopology(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    Rng rng(seed++);
    benchmark::DoNotOptimize(generate_random_topology(n, 0.2, rng));
  }
}
BENCHMARK(BM_GenerateTopology)->Arg(20)->Arg(100)->Arg(400);

static void BM_MpacIteration(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto topo = make_topology(n, 0.5, 1);
  const auto config = MpacConfig::uniform(n);
  const auto obs = make_observations(n, 2);
  auto mpac = init_mpac(topo, config, 0.0);
  for (auto _ : state) {
    mpac = mpac_iteration(mpac, obs, config);
    benchmark::DoNotOptimize(mpac.consensus_freq.data());
  }
}
BENCHMARK(BM_MpacIteration)->Arg(20)->Arg(100);

static void BM_DfpcStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto topo = make_topology(n, 0.5, 3);
  const auto mix = metropolis_weights(topo);
  Eigen::VectorXd f = Eigen::VectorXd::Random(n) * 1e5;
  Eigen::VectorXd th = Eigen::VectorXd::Random(n);
  for (auto _ : state) {
    auto [f2, th2] = dfpc_step(f, th, mix);
    f.swap(f2);
    th.swap(th2);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_DfpcStep)->Arg(20)->Arg(100);

static void BM_ClosedFormConsensus(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto topo = make_topology(n, 0.5, 4);
  ConsensusProblem problem;
  problem.laplacian = laplacian(topo);
  problem.weights = Eigen::VectorXd::Ones(n);
  problem.gamma = 1e12;
  problem.targets = Eigen::VectorXd::Random(n) * 1e5;
  for (auto _ : state) benchmark::DoNotOptimize(closed_form_consensus(problem));
}
BENCHMARK(BM_ClosedFormConsensus)->Arg(20)->Arg(100);

static void BM_RunTrial(benchmark::State& state) {
  ExperimentConfig config;
  config.max_iterations = 100;
  config.eta_deg = 0.0;
  const CellParams cell{static_cast<int>(state.range(0)), 0.5, 0.0};
  const Algorithm alg = state.range(1) == 0 ? Algorithm::mpac : Algorithm::dfpc;
  int trial = 0;
  for (auto _ : state)
    benchmark::DoNotOptimize(run_trial(config, cell, alg, trial++));
}
BENCHMARK(BM_RunTrial)->Args({20, 0})->Args({20, 1})->Args({100, 0})->Args({100, 1})
    ->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
