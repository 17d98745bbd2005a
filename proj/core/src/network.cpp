#include "besmn/network.hpp"

#include <numeric>
#include <ostream>
#include <stdexcept>

namespace besmn {

CommunitySpec::CommunitySpec(std::vector<int> sizes_in, std::vector<double> contact_in,
                             std::vector<double> recovery_in)
    : sizes(std::move(sizes_in)),
      contact_rates(std::move(contact_in)),
      recovery_rates(std::move(recovery_in)) {
  if (sizes.empty()) throw std::invalid_argument("CommunitySpec: at least one community");
  if (contact_rates.size() != sizes.size() || recovery_rates.size() != sizes.size())
    throw std::invalid_argument("CommunitySpec: rate lists must match the community count");
  for (int s : sizes)
    if (s <= 0) throw std::invalid_argument("CommunitySpec: community sizes must be positive");
  for (double b : contact_rates)
    if (!(b > 0.0 && b < 1.0))
      throw std::invalid_argument("CommunitySpec: contact rates must lie in (0,1)");
  for (double a : recovery_rates)
    if (!(a > 0.0 && a < 1.0))
      throw std::invalid_argument("CommunitySpec: recovery rates must lie in (0,1)");
}

int CommunitySpec::total_nodes() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

BlockProbabilityMatrix::BlockProbabilityMatrix(std::vector<std::vector<double>> entries)
    : entries_(std::move(entries)) {
  const std::size_t m = entries_.size();
  if (m == 0) throw std::invalid_argument("BlockProbabilityMatrix: empty");
  for (const auto& row : entries_)
    if (row.size() != m) throw std::invalid_argument("BlockProbabilityMatrix: must be square");
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      if (!(entries_[a][b] >= 0.0 && entries_[a][b] <= 1.0))
        throw std::invalid_argument("BlockProbabilityMatrix: entries must lie in [0,1]");
      if (entries_[a][b] != entries_[b][a])
        throw std::invalid_argument("BlockProbabilityMatrix: must be symmetric");
    }
}

int CommunityGraph::community_size(int m) const {
  int count = 0;
  for (int label : labels) count += (label == m);
  return count;
}

int CommunityGraph::community_offset(int m) const {
  for (int i = 0; i < n; ++i)
    if (labels[static_cast<std::size_t>(i)] == m) return i;
  throw std::out_of_range("community_offset: empty community");
}

CommunityGraph generate_sbm(Rng& rng, const CommunitySpec& spec,
                            const BlockProbabilityMatrix& B) {
  if (B.dim() != spec.communities())
    throw std::invalid_argument("generate_sbm: block matrix dimension must match community count");
  CommunityGraph g;
  g.n = spec.total_nodes();
  g.labels.reserve(static_cast<std::size_t>(g.n));
  for (int m = 0; m < spec.communities(); ++m)
    for (int c = 0; c < spec.sizes[static_cast<std::size_t>(m)]; ++c) g.labels.push_back(m);
  g.contact_rates = spec.contact_rates;
  g.recovery_rates = spec.recovery_rates;
  g.adjacency.assign(static_cast<std::size_t>(g.n), {});
  for (int i = 0; i < g.n; ++i) {
    for (int j = i + 1; j < g.n; ++j) {
      const double prob = B.at(g.labels[static_cast<std::size_t>(i)],
                               g.labels[static_cast<std::size_t>(j)]);
      if (rng.uniform01() < prob) {
        g.adjacency[static_cast<std::size_t>(i)].push_back(j);
        g.adjacency[static_cast<std::size_t>(j)].push_back(i);
        ++g.edges;
      }
    }
  }
  return g;
}

double average_degree(const CommunityGraph& g) {
  if (g.n < 1) throw std::invalid_argument("average_degree: empty graph");
  return 2.0 * static_cast<double>(g.edges) / static_cast<double>(g.n);
}

double offset_contact_rate(double beta, int n, double avg_degree) {
  if (!(avg_degree > 0.0)) throw std::invalid_argument("offset_contact_rate: avg_degree must be positive");
  if (!(beta >= 0.0)) throw std::invalid_argument("offset_contact_rate: beta must be nonnegative");
  const double result = beta * static_cast<double>(n) / avg_degree;
  if (result >= 1.0)
    throw std::domain_error("offset_contact_rate: rescaled rate leaves (0,1); rescale inputs");
  return result;
}

void write_edge_list(const CommunityGraph& g, std::ostream& out) {
  for (int i = 0; i < g.n; ++i)
    for (int j : g.adjacency[static_cast<std::size_t>(i)])
      if (i < j) out << i << ' ' << j << '\n';
}

void write_labels(const CommunityGraph& g, std::ostream& out) {
  for (int i = 0; i < g.n; ++i) out << i << ' ' << g.labels[static_cast<std::size_t>(i)] << '\n';
}

}  // namespace besmn
