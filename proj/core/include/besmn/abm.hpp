#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "besmn/doublespend.hpp"
#include "besmn/network.hpp"
#include "besmn/random.hpp"

namespace besmn {

enum class Health : unsigned char { Susceptible, Infected, Recovered };

// Run-wide knobs. Per-community rates live on the graph.
struct SimConfig {
  int l = 15;  // block-time units per network-time step
  ConfirmationDepth depth{2};
  MinerPower power{0.3, 0.7};
  int seeds_per_community = 3;
  int horizon = 500;
  bool blockchain_enabled = true;
  std::uint64_t rng_seed = 1;
};

// Per-node state. `pending` is the block-time countdown of an accepted but
// not yet delivered transmission; +infinity marks a node with no timer armed.
// It is meaningful only while the node is susceptible.
struct SimState {
  std::vector<Health> health;
  std::vector<double> pending;
  int step = 0;

  std::array<long long, 3> counts() const;
  std::array<long long, 3> counts(const CommunityGraph& g, int community) const;
};

struct TrajectoryRow {
  long long S = 0, I = 0, R = 0;

  bool operator==(const TrajectoryRow&) const = default;
};

// Population counts per step, aggregate and per community.
struct Trajectory {
  std::vector<TrajectoryRow> total;                   // [t]
  std::vector<std::vector<TrajectoryRow>> community;  // [m][t]

  int steps() const { return static_cast<int>(total.size()); }
};

// The independent draw sequences one run consumes. Substreams mean a paired
// rerun with a different engine reuses the same graph and seed choices.
struct SimStreams {
  Rng contacts;
  Rng sampling;
  Rng recovery;

  SimStreams(std::uint64_t seed, std::uint64_t replicate)
      : contacts(seed, Stream::Contacts, replicate),
        sampling(seed, Stream::Sampling, replicate),
        recovery(seed, Stream::Recovery, replicate) {}
};

// Marks seeds_per_community uniformly chosen nodes per community Infected;
// everyone else starts Susceptible with no timer.
SimState initialize(Rng& seeding, const CommunityGraph& graph, const SimConfig& cfg);

// Infected graph-neighbors of susceptible node i belonging to community m.
std::vector<int> infected_neighbors(const SimState& state, const CommunityGraph& graph, int i,
                                    int m);

// One synchronous step of the delayed-transmission dynamics. Reading order
// per susceptible node: each infected neighbor (adjacency order, hence
// grouped by community) contacts it with the neighbor's community rate; a
// successful contact samples a transmission time and the minimum over
// samples arms the countdown. A node with an armed countdown accepts no new
// contacts; it becomes infected on the step its remaining time drops to l or
// less, else the countdown shrinks by l. Recovery applies to nodes infected
// at the start of the step, each with its own community rate.
void step_blockchain(SimState& state, const CommunityGraph& graph, const SimConfig& cfg,
                     const TransmissionTimeDistribution& ttd, SimStreams& streams);

// One synchronous step of the undelayed dynamics: susceptible i becomes
// infected with probability 1 - prod over infected neighbors j of
// (1 - beta_{c_j}); recovery as above.
void step_baseline(SimState& state, const CommunityGraph& graph, const SimConfig& cfg,
                   SimStreams& streams);

// Full run: initialize, then step until the horizon or until no infected
// nodes and no armed timers remain. Records counts at every step including
// the initial state. `replicate` selects the random substream family.
Trajectory run(const CommunityGraph& graph, const SimConfig& cfg,
               const TransmissionTimeDistribution* ttd, std::uint64_t replicate = 0);

}  // namespace besmn
