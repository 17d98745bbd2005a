#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "besmn/commands.hpp"

namespace {

// --out beats the config file; the BESMN_OUT environment variable is a
// last-resort default for scripting.
void apply_out_override(const std::string& flag_value, std::optional<std::string>& target) {
  if (!flag_value.empty()) {
    target = flag_value;
  } else if (const char* env = std::getenv("BESMN_OUT"); env && *env) {
    target = std::string(env);
  }
}

// Same fallback for subcommands whose output directory has a plain default.
void apply_env_out(const CLI::Option* out_flag, std::string& target) {
  if (out_flag->count()) return;
  if (const char* env = std::getenv("BESMN_OUT"); env && *env) target = env;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Misinformation-spread simulator for blockchain-mediated social networks"};
  app.require_subcommand(1);

  besmn::DistributionOptions dist;
  CLI::App* cmd_dist = app.add_subcommand(
      "distribution", "Tabulate the transmission-time distribution as CSV");
  cmd_dist->add_option("--k", dist.k, "Confirmation depth")->check(CLI::PositiveNumber);
  cmd_dist->add_option("--mu-d", dist.mu_d, "Dishonest mining rate");
  cmd_dist->add_option("--mu-h", dist.mu_h, "Honest mining rate");
  cmd_dist->add_option("--s-max", dist.s_max,
                       "Last block-time grid point (negative: table end)");
  cmd_dist->add_option("--tol", dist.tol, "Series truncation tolerance");
  CLI::Option* dist_out_opt = cmd_dist->add_option("--out", dist.out_dir, "Output directory");

  besmn::SimulateOptions sim;
  std::string sim_config_path, sim_mode = "both", sim_out;
  std::uint64_t sim_seed = 0;
  int sim_replicates = 0;
  CLI::App* cmd_sim = app.add_subcommand(
      "simulate", "Run seeded agent-based replicates and write trajectories + metrics");
  cmd_sim->add_option("--config", sim_config_path, "Scenario config file (JSON)")
      ->check(CLI::ExistingFile);
  CLI::Option* sim_seed_opt = cmd_sim->add_option("--seed", sim_seed, "Base RNG seed");
  CLI::Option* sim_rep_opt =
      cmd_sim->add_option("--replicates", sim_replicates, "Number of replicates")
          ->check(CLI::PositiveNumber);
  cmd_sim->add_option("--blockchain", sim_mode, "Delayed-transmission engine: on, off, or both")
      ->check(CLI::IsMember({"on", "off", "both"}));
  cmd_sim->add_option("--out", sim_out, "Output directory (overrides config)");
  cmd_sim->add_flag("--emit-graphs", sim.emit_graphs,
                    "Also write per-replicate edge lists and community labels");

  besmn::MeanFieldOptions mf;
  std::string mf_mode = "classical";
  CLI::App* cmd_mf = app.add_subcommand(
      "meanfield", "Run the population-level recursion and write its trajectory");
  cmd_mf->add_option("--mode", mf_mode, "classical or blockchain")
      ->check(CLI::IsMember({"classical", "blockchain"}));
  cmd_mf->add_option("--beta", mf.beta, "Contact rate");
  cmd_mf->add_option("--alpha", mf.alpha, "Recovery rate");
  cmd_mf->add_option("--s0", mf.S0, "Initial susceptible count");
  cmd_mf->add_option("--i0", mf.I0, "Initial infected count");
  cmd_mf->add_option("--r0", mf.R0_pop, "Initial recovered count");
  cmd_mf->add_option("--horizon", mf.horizon, "Steps to run")->check(CLI::PositiveNumber);
  cmd_mf->add_option("--l", mf.l, "Block-time units per step")->check(CLI::PositiveNumber);
  cmd_mf->add_option("--k", mf.k, "Confirmation depth")->check(CLI::PositiveNumber);
  cmd_mf->add_option("--mu-d", mf.mu_d, "Dishonest mining rate");
  cmd_mf->add_option("--mu-h", mf.mu_h, "Honest mining rate");
  cmd_mf->add_option("--tol", mf.tol, "Series truncation tolerance");
  cmd_mf->add_flag("--delta-at-zero", mf.delta_at_zero,
                   "Replace the race table by all mass at lag 0 (reduction check)");
  cmd_mf->add_flag("--disjoint-windows", mf.disjoint_lag_windows,
                   "Use disjoint lag windows instead of the shared-boundary form");
  CLI::Option* mf_out_opt = cmd_mf->add_option("--out", mf.out_dir, "Output directory");

  besmn::EstimateOptions est;
  CLI::App* cmd_est = app.add_subcommand(
      "estimate", "Fit contact/recovery/initial-state parameters to an observed series");
  cmd_est->add_option("data", est.data_path, "Observed series (CSV)")
      ->required()
      ->check(CLI::ExistingFile);
  cmd_est->add_option("--iterations", est.iterations, "Sampler iterations")
      ->check(CLI::PositiveNumber);
  cmd_est->add_option("--burn-in", est.burn_in, "Fraction of the chain to discard")
      ->check(CLI::Range(0.0, 1.0));
  cmd_est->add_option("--seed", est.seed, "Base RNG seed");
  cmd_est->add_option("--bin-width", est.bin_width, "Bin width for raw timestamp input")
      ->check(CLI::PositiveNumber);
  cmd_est->add_flag("--smooth", est.smooth, "Centered moving average (width 3) before fitting");
  CLI::Option* est_out_opt = cmd_est->add_option("--out", est.out_dir, "Output directory");

  besmn::ValidateOptions val;
  CLI::App* cmd_val = app.add_subcommand(
      "validate", "Run an oracle comparison suite: race, ballot, reduction, or prior");
  cmd_val->add_option("suite", val.suite, "Suite name")->required();
  cmd_val->add_option("--seed", val.seed, "Base RNG seed");
  cmd_val->add_option("--tol", val.tol, "Comparison tolerance where applicable");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (app.got_subcommand(cmd_dist)) {
      apply_env_out(dist_out_opt, dist.out_dir);
      return besmn::cmd_distribution(dist, std::cout);
    }
    if (app.got_subcommand(cmd_sim)) {
      sim.config = sim_config_path.empty() ? besmn::ScenarioConfig{}
                                           : besmn::ScenarioConfig::from_file(sim_config_path);
      if (sim_seed_opt->count()) sim.config.rng_seed = sim_seed;
      if (sim_rep_opt->count()) sim.config.replicates = sim_replicates;
      if (sim_mode == "on")
        sim.mode = besmn::EngineMode::On;
      else if (sim_mode == "off")
        sim.mode = besmn::EngineMode::Off;
      else
        sim.mode = besmn::EngineMode::Both;
      apply_out_override(sim_out, sim.out_dir);
      return besmn::cmd_simulate(sim, std::cout);
    }
    if (app.got_subcommand(cmd_mf)) {
      mf.blockchain = mf_mode == "blockchain";
      apply_env_out(mf_out_opt, mf.out_dir);
      return besmn::cmd_meanfield(mf, std::cout);
    }
    if (app.got_subcommand(cmd_est)) {
      apply_env_out(est_out_opt, est.out_dir);
      return besmn::cmd_estimate(est, std::cout);
    }
    if (app.got_subcommand(cmd_val)) return besmn::cmd_validate(val, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
