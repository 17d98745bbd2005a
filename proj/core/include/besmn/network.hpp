#pragma once

#include <iosfwd>
#include <vector>

#include "besmn/random.hpp"

namespace besmn {

// Community layout plus the per-community epidemic rates that ride along
// with the generated graph.
struct CommunitySpec {
  std::vector<int> sizes;
  std::vector<double> contact_rates;   // beta_m, each in (0,1)
  std::vector<double> recovery_rates;  // alpha_m, each in (0,1)

  CommunitySpec(std::vector<int> sizes_in, std::vector<double> contact_in,
                std::vector<double> recovery_in);

  int communities() const { return static_cast<int>(sizes.size()); }
  int total_nodes() const;
};

// Symmetric matrix of pairwise connection probabilities between communities.
struct BlockProbabilityMatrix {
  explicit BlockProbabilityMatrix(std::vector<std::vector<double>> entries);

  double at(int a, int b) const { return entries_[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)]; }
  int dim() const { return static_cast<int>(entries_.size()); }

 private:
  std::vector<std::vector<double>> entries_;
};

// Undirected block-model graph. Nodes are laid out in contiguous community
// blocks (labels ascending), so sorted adjacency lists are automatically
// grouped by neighbor community. Rates are copied from the generating spec.
struct CommunityGraph {
  int n = 0;
  std::vector<std::vector<int>> adjacency;
  std::vector<int> labels;  // community index per node, 0-based
  std::vector<double> contact_rates;
  std::vector<double> recovery_rates;
  long long edges = 0;

  int communities() const { return static_cast<int>(contact_rates.size()); }
  int community_size(int m) const;
  // First node index of community m; valid because blocks are contiguous.
  int community_offset(int m) const;
};

// Each unordered pair {i, j} is connected independently with probability
// B[c_i][c_j]; no self-loops.
CommunityGraph generate_sbm(Rng& rng, const CommunitySpec& spec,
                            const BlockProbabilityMatrix& B);

// 2|E| / n.
double average_degree(const CommunityGraph& g);

// Mass-action contact rate rescaled to a per-neighbor probability on a graph
// with the given mean degree: beta * n / avg_degree. Throws if the result
// leaves (0,1); the caller must rescale.
double offset_contact_rate(double beta, int n, double avg_degree);

// Plain-text serialization for reproducible replay: "i j" per edge (i < j)
// and "i c_i" per node, all 0-based.
void write_edge_list(const CommunityGraph& g, std::ostream& out);
void write_labels(const CommunityGraph& g, std::ostream& out);

}  // namespace besmn
