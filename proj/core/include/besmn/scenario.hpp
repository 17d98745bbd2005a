#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "besmn/abm.hpp"
#include "besmn/network.hpp"

namespace besmn {

// One simulation scenario: the network layout, the race parameters that
// shape the transmission delay, and the run controls. Parsed from a JSON
// config file; every field is checked with a path-qualified diagnostic.
struct ScenarioConfig {
  std::vector<int> sizes{100, 60, 40};
  std::vector<std::vector<double>> block_matrix{
      {0.2, 0.015, 0.012}, {0.015, 0.2, 0.02}, {0.012, 0.02, 0.2}};
  std::vector<double> contact_rates{0.02, 0.0425, 0.07};
  std::vector<double> recovery_rates{0.1, 0.022, 0.005};

  int k = 2;
  double mu_d = 0.3;
  double mu_h = 0.7;
  int l = 15;

  int horizon = 500;
  int seeds_per_community = 3;
  int replicates = 100;
  std::uint64_t rng_seed = 1;

  std::string output_directory = "out";

  CommunitySpec community_spec() const;
  BlockProbabilityMatrix block_probability() const;
  SimConfig sim_config(bool blockchain_enabled) const;

  // Cross-field checks beyond what the nested types enforce.
  void validate() const;

  static ScenarioConfig from_json(const nlohmann::json& j);
  static ScenarioConfig from_file(const std::string& path);
  nlohmann::json to_json() const;
};

}  // namespace besmn
