#include <benchmark/benchmark.h>

#include <vector>

#include "besmn/abm.hpp"
#include "besmn/doublespend.hpp"
#include "besmn/estimation.hpp"
#include "besmn/meanfield.hpp"
#include "besmn/network.hpp"
#include "besmn/random.hpp"
#include "besmn/scenario.hpp"

using namespace besmn;

namespace {

const ScenarioConfig& study() {
  static const ScenarioConfig cfg;
  return cfg;
}

const TransmissionTimeDistribution& shared_ttd() {
  static const TransmissionTimeDistribution ttd(ConfirmationDepth(2), MinerPower(0.3, 0.7));
  return ttd;
}

void BM_HittingTable(benchmark::State& state) {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  for (auto _ : state)
    benchmark::DoNotOptimize(hitting_distribution(depth, power, 1e-12));
}
BENCHMARK(BM_HittingTable);

void BM_TransmissionTable(benchmark::State& state) {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  for (auto _ : state)
    benchmark::DoNotOptimize(TransmissionTimeDistribution(depth, power, 1e-10));
}
BENCHMARK(BM_TransmissionTable);

void BM_TransmissionSample(benchmark::State& state) {
  const auto& ttd = shared_ttd();
  Rng rng(1, Stream::Sampling);
  for (auto _ : state) benchmark::DoNotOptimize(ttd.sample(rng));
}
BENCHMARK(BM_TransmissionSample);

void BM_MonteCarloRace(benchmark::State& state) {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  Rng rng(1, Stream::Sampling);
  for (auto _ : state) benchmark::DoNotOptimize(monte_carlo_race(rng, depth, power, 200.0));
}
BENCHMARK(BM_MonteCarloRace);

void BM_GraphGeneration(benchmark::State& state) {
  const CommunitySpec spec = study().community_spec();
  const BlockProbabilityMatrix B = study().block_probability();
  std::uint64_t r = 0;
  for (auto _ : state) {
    Rng rng(1, Stream::Graph, r++);
    benchmark::DoNotOptimize(generate_sbm(rng, spec, B));
  }
}
BENCHMARK(BM_GraphGeneration);

void BM_DelayedEngineRun(benchmark::State& state) {
  const CommunitySpec spec = study().community_spec();
  const BlockProbabilityMatrix B = study().block_probability();
  Rng graph_rng(1, Stream::Graph, 0);
  const CommunityGraph graph = generate_sbm(graph_rng, spec, B);
  SimConfig cfg = study().sim_config(true);
  cfg.horizon = 100;
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run(graph, cfg, &shared_ttd(), r++));
}
BENCHMARK(BM_DelayedEngineRun);

void BM_BaselineEngineRun(benchmark::State& state) {
  const CommunitySpec spec = study().community_spec();
  const BlockProbabilityMatrix B = study().block_probability();
  Rng graph_rng(1, Stream::Graph, 0);
  const CommunityGraph graph = generate_sbm(graph_rng, spec, B);
  SimConfig cfg = study().sim_config(false);
  cfg.horizon = 100;
  std::uint64_t r = 0;
  for (auto _ : state) benchmark::DoNotOptimize(run(graph, cfg, nullptr, r++));
}
BENCHMARK(BM_BaselineEngineRun);

void BM_DelayedMeanField(benchmark::State& state) {
  MeanFieldParams p;
  p.beta = 0.00359;
  p.alpha = 0.02166;
  p.S0 = 115.67961;
  p.I0 = 4.48387;
  p.l = 15;
  p.ttd = &shared_ttd();
  for (auto _ : state) benchmark::DoNotOptimize(blockchain_sir_run(p, 500));
}
BENCHMARK(BM_DelayedMeanField);

void BM_McmcIterations(benchmark::State& state) {
  ParamVector truth{0.00359, 0.02166, 4.48387, 115.67961, 14.87384};
  Rng data_rng(1, Stream::Data);
  const ObservedSeries data = synthetic_series(data_rng, truth, 87);
  McmcOptions opt;
  opt.iterations = state.range(0);
  opt.burn_in_fraction = 0.0;
  opt.scales = ProposalScales::defaults(PriorSupport::from_data(data));
  std::uint64_t r = 0;
  for (auto _ : state) {
    Rng rng(1, Stream::Proposal, r++);
    benchmark::DoNotOptimize(metropolis_hastings(rng, data, opt));
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_McmcIterations)->Arg(1000);

}  // namespace

BENCHMARK_MAIN();
