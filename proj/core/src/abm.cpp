#include "besmn/abm.hpp"

#include <algorithm>
#include <stdexcept>

namespace besmn {

std::array<long long, 3> SimState::counts() const {
  std::array<long long, 3> c{0, 0, 0};
  for (Health h : health) ++c[static_cast<std::size_t>(h)];
  return c;
}

std::array<long long, 3> SimState::counts(const CommunityGraph& g, int community) const {
  std::array<long long, 3> c{0, 0, 0};
  for (std::size_t i = 0; i < health.size(); ++i)
    if (g.labels[i] == community) ++c[static_cast<std::size_t>(health[i])];
  return c;
}

SimState initialize(Rng& seeding, const CommunityGraph& graph, const SimConfig& cfg) {
  if (cfg.seeds_per_community < 0)
    throw std::invalid_argument("initialize: seeds_per_community must be nonnegative");
  if (cfg.l < 1) throw std::invalid_argument("initialize: l must be >= 1");
  SimState state;
  state.health.assign(static_cast<std::size_t>(graph.n), Health::Susceptible);
  state.pending.assign(static_cast<std::size_t>(graph.n), kInfiniteTime);
  int offset = 0;
  for (int m = 0; m < graph.communities(); ++m) {
    const int size = graph.community_size(m);
    if (cfg.seeds_per_community > size)
      throw std::invalid_argument("initialize: seeds exceed community size");
    for (int idx : sample_without_replacement(seeding, offset, offset + size,
                                              cfg.seeds_per_community))
      state.health[static_cast<std::size_t>(idx)] = Health::Infected;
    offset += size;
  }
  return state;
}

std::vector<int> infected_neighbors(const SimState& state, const CommunityGraph& graph, int i,
                                    int m) {
  std::vector<int> result;
  for (int j : graph.adjacency[static_cast<std::size_t>(i)])
    if (state.health[static_cast<std::size_t>(j)] == Health::Infected &&
        graph.labels[static_cast<std::size_t>(j)] == m)
      result.push_back(j);
  return result;
}

namespace {

// Recovery draws read the step-start snapshot, so a node infected this step
// first risks recovery on the next one.
void apply_recovery(const std::vector<Health>& snapshot, std::vector<Health>& next,
                    const CommunityGraph& graph, Rng& recovery) {
  for (std::size_t i = 0; i < snapshot.size(); ++i)
    if (snapshot[i] == Health::Infected) {
      const double alpha = graph.recovery_rates[static_cast<std::size_t>(graph.labels[i])];
      if (recovery.uniform01() < alpha) next[i] = Health::Recovered;
    }
}

}  // namespace

void step_blockchain(SimState& state, const CommunityGraph& graph, const SimConfig& cfg,
                     const TransmissionTimeDistribution& ttd, SimStreams& streams) {
  const std::vector<Health> snapshot = state.health;
  std::vector<Health> next = snapshot;
  std::vector<double> pending_next = state.pending;
  for (int i = 0; i < graph.n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (snapshot[ui] != Health::Susceptible) continue;
    if (state.pending[ui] == kInfiniteTime) {
      // Sorted adjacency visits infected neighbors community by community.
      double best = kInfiniteTime;
      for (int j : graph.adjacency[ui]) {
        const std::size_t uj = static_cast<std::size_t>(j);
        if (snapshot[uj] != Health::Infected) continue;
        const double beta = graph.contact_rates[static_cast<std::size_t>(graph.labels[uj])];
        if (streams.contacts.uniform01() < beta)
          best = std::min(best, ttd.sample(streams.sampling));
      }
      pending_next[ui] = best;
    } else if (state.pending[ui] <= static_cast<double>(cfg.l)) {
      next[ui] = Health::Infected;
      pending_next[ui] = kInfiniteTime;
    } else {
      pending_next[ui] = state.pending[ui] - static_cast<double>(cfg.l);
    }
  }
  apply_recovery(snapshot, next, graph, streams.recovery);
  state.health = std::move(next);
  state.pending = std::move(pending_next);
  ++state.step;
}

void step_baseline(SimState& state, const CommunityGraph& graph, const SimConfig& cfg,
                   SimStreams& streams) {
  (void)cfg;
  const std::vector<Health> snapshot = state.health;
  std::vector<Health> next = snapshot;
  for (int i = 0; i < graph.n; ++i) {
    const std::size_t ui = static_cast<std::size_t>(i);
    if (snapshot[ui] != Health::Susceptible) continue;
    double escape = 1.0;  // probability no infected neighbor transmits
    for (int j : graph.adjacency[ui]) {
      const std::size_t uj = static_cast<std::size_t>(j);
      if (snapshot[uj] == Health::Infected)
        escape *= 1.0 - graph.contact_rates[static_cast<std::size_t>(graph.labels[uj])];
    }
    if (escape < 1.0 && streams.contacts.uniform01() < 1.0 - escape)
      next[ui] = Health::Infected;
  }
  apply_recovery(snapshot, next, graph, streams.recovery);
  state.health = std::move(next);
  ++state.step;
}

Trajectory run(const CommunityGraph& graph, const SimConfig& cfg,
               const TransmissionTimeDistribution* ttd, std::uint64_t replicate) {
  if (cfg.horizon < 0) throw std::invalid_argument("run: horizon must be nonnegative");
  if (cfg.blockchain_enabled && ttd == nullptr)
    throw std::invalid_argument("run: delayed dynamics need a transmission-time distribution");
  Rng seeding(cfg.rng_seed, Stream::Seeding, replicate);
  SimStreams streams(cfg.rng_seed, replicate);
  SimState state = initialize(seeding, graph, cfg);

  Trajectory traj;
  const int M = graph.communities();
  traj.community.assign(static_cast<std::size_t>(M), {});
  auto record = [&]() {
    const auto total = state.counts();
    traj.total.push_back({total[0], total[1], total[2]});
    for (int m = 0; m < M; ++m) {
      const auto c = state.counts(graph, m);
      traj.community[static_cast<std::size_t>(m)].push_back({c[0], c[1], c[2]});
    }
  };
  record();

  for (int t = 1; t <= cfg.horizon; ++t) {
    if (cfg.blockchain_enabled)
      step_blockchain(state, graph, cfg, *ttd, streams);
    else
      step_baseline(state, graph, cfg, streams);
    record();
    const bool any_infected = traj.total.back().I > 0;
    bool any_pending = false;
    if (cfg.blockchain_enabled)
      for (std::size_t i = 0; i < state.pending.size(); ++i)
        if (state.health[i] == Health::Susceptible && state.pending[i] != kInfiniteTime) {
          any_pending = true;
          break;
        }
    if (!any_infected && !any_pending) break;  // absorbing state
  }
  return traj;
}

}  // namespace besmn
