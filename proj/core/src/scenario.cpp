#include "besmn/scenario.hpp"

#include <fstream>
#include <stdexcept>

namespace besmn {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw std::invalid_argument("config error at " + path + ": " + what);
}

const json& member(const json& j, const std::string& parent, const char* key) {
  if (!j.is_object()) fail(parent, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(parent + "." + key, "missing");
  return *it;
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

int integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

std::vector<double> number_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(number(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

std::vector<int> integer_list(const json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(integer(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

CommunitySpec ScenarioConfig::community_spec() const {
  return CommunitySpec(sizes, contact_rates, recovery_rates);
}

BlockProbabilityMatrix ScenarioConfig::block_probability() const {
  return BlockProbabilityMatrix(block_matrix);
}

SimConfig ScenarioConfig::sim_config(bool blockchain_enabled) const {
  SimConfig cfg;
  cfg.l = l;
  cfg.depth = ConfirmationDepth(k);
  cfg.power = MinerPower(mu_d, mu_h);
  cfg.seeds_per_community = seeds_per_community;
  cfg.horizon = horizon;
  cfg.blockchain_enabled = blockchain_enabled;
  cfg.rng_seed = rng_seed;
  return cfg;
}

void ScenarioConfig::validate() const {
  community_spec();      // community sizes and rates
  block_probability();   // matrix shape, symmetry, range
  if (static_cast<int>(block_matrix.size()) != static_cast<int>(sizes.size()))
    throw std::invalid_argument(
        "config error at network.block_matrix: dimension must match network.sizes");
  sim_config(true);      // race parameters, l, seeds
  if (replicates < 1) throw std::invalid_argument("config error at simulation.replicates: must be >= 1");
  if (horizon < 1) throw std::invalid_argument("config error at simulation.horizon: must be >= 1");
}

ScenarioConfig ScenarioConfig::from_json(const json& j) {
  ScenarioConfig cfg;
  const json& network = member(j, "(root)", "network");
  cfg.sizes = integer_list(member(network, "network", "sizes"), "network.sizes");
  {
    const json& bm = member(network, "network", "block_matrix");
    if (!bm.is_array()) fail("network.block_matrix", "expected an array of rows");
    cfg.block_matrix.clear();
    for (std::size_t r = 0; r < bm.size(); ++r)
      cfg.block_matrix.push_back(
          number_list(bm[r], "network.block_matrix[" + std::to_string(r) + "]"));
  }
  cfg.contact_rates =
      number_list(member(network, "network", "contact_rates"), "network.contact_rates");
  cfg.recovery_rates =
      number_list(member(network, "network", "recovery_rates"), "network.recovery_rates");

  const json& chain = member(j, "(root)", "blockchain");
  cfg.k = integer(member(chain, "blockchain", "k"), "blockchain.k");
  cfg.mu_d = number(member(chain, "blockchain", "mu_d"), "blockchain.mu_d");
  cfg.mu_h = number(member(chain, "blockchain", "mu_h"), "blockchain.mu_h");
  cfg.l = integer(member(chain, "blockchain", "l"), "blockchain.l");

  const json& sim = member(j, "(root)", "simulation");
  cfg.horizon = integer(member(sim, "simulation", "horizon"), "simulation.horizon");
  cfg.seeds_per_community = integer(member(sim, "simulation", "seeds_per_community"),
                                    "simulation.seeds_per_community");
  cfg.replicates = integer(member(sim, "simulation", "replicates"), "simulation.replicates");
  {
    const json& seed = member(sim, "simulation", "rng_seed");
    if (!seed.is_number_unsigned() && !seed.is_number_integer())
      fail("simulation.rng_seed", "expected an integer");
    cfg.rng_seed = seed.get<std::uint64_t>();
  }

  if (j.contains("output")) {
    const json& out = j.at("output");
    if (out.contains("directory")) {
      if (!out.at("directory").is_string()) fail("output.directory", "expected a string");
      cfg.output_directory = out.at("directory").get<std::string>();
    }
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig ScenarioConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config error: cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config error in " + path + ": " + e.what());
  }
  return from_json(j);
}

nlohmann::json ScenarioConfig::to_json() const {
  json j;
  j["network"]["sizes"] = sizes;
  j["network"]["block_matrix"] = block_matrix;
  j["network"]["contact_rates"] = contact_rates;
  j["network"]["recovery_rates"] = recovery_rates;
  j["blockchain"]["k"] = k;
  j["blockchain"]["mu_d"] = mu_d;
  j["blockchain"]["mu_h"] = mu_h;
  j["blockchain"]["l"] = l;
  j["simulation"]["horizon"] = horizon;
  j["simulation"]["seeds_per_community"] = seeds_per_community;
  j["simulation"]["replicates"] = replicates;
  j["simulation"]["rng_seed"] = rng_seed;
  j["output"]["directory"] = output_directory;
  return j;
}

}  // namespace besmn
