// Acceptance harness. Each criterion runs standalone (argument c1..c10) or
// as part of the full sweep (no argument) and prints exactly one verdict
// line: "acceptance cN: PASS — detail" or "acceptance cN: FAIL — detail".
// The exit code is 0 only when every requested criterion passes.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "besmn/abm.hpp"
#include "besmn/commands.hpp"
#include "besmn/doublespend.hpp"
#include "besmn/estimation.hpp"
#include "besmn/meanfield.hpp"
#include "besmn/metrics.hpp"
#include "besmn/network.hpp"
#include "besmn/random.hpp"
#include "besmn/scenario.hpp"

using namespace besmn;
namespace fs = std::filesystem;

namespace {

std::string num(double v, int precision = 6) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

void verdict(int n, bool pass, const std::string& detail) {
  std::cout << "acceptance c" << n << ": " << (pass ? "PASS" : "FAIL") << " — " << detail
            << std::endl;
}

// ---------------------------------------------------------------------------
// c1: the first-passage pmf recursion against the closed form and against
// exhaustive walk enumeration.

unsigned long long binomial(int n, int m) {
  unsigned long long f[16];
  f[0] = 1;
  for (int i = 1; i <= n; ++i) f[i] = f[i - 1] * static_cast<unsigned long long>(i);
  return f[n] / (f[m] * f[n - m]);
}

// Count +/-1 walks of length n whose partial sum first reaches +k at step n.
long long enumerate_walks(int k, int n) {
  long long count = 0;
  for (std::uint64_t bits = 0; bits < (1ULL << n); ++bits) {
    int sum = 0;
    bool early = false;
    for (int step = 0; step < n; ++step) {
      sum += (bits >> step) & 1u ? 1 : -1;
      if (sum == k && step + 1 < n) {
        early = true;
        break;
      }
    }
    if (!early && sum == k) ++count;
  }
  return count;
}

int run_c1() {
  const double kTol = 1e-10;
  double worst_table = 0.0;
  double worst_recursion = 0.0;
  bool enumeration_exact = true;
  for (int k = 1; k <= 3; ++k) {
    const ConfirmationDepth depth(k);
    for (double p : {0.1, 0.3, 0.45}) {
      const MinerPower power(p, 1.0 - p);
      const auto table = hitting_distribution(depth, power, 1e-13);
      for (int i = 0; i <= table.max_index(); ++i) {
        const double closed = hitting_pmf(depth, p, i);
        worst_table = std::max(worst_table,
                               std::abs(table.g[static_cast<std::size_t>(i)] - closed) / closed);
      }
      // The tabulated run stops once its residual accounting saturates in
      // double precision; the recursion itself is checked out to i = 200.
      const double q = 1.0 - p;
      double g = std::pow(p, k);
      for (int i = 0; i <= 200; ++i) {
        const double closed = hitting_pmf(depth, p, i);
        worst_recursion = std::max(worst_recursion, std::abs(g - closed) / closed);
        const double kk = static_cast<double>(k);
        const double ii = static_cast<double>(i);
        g *= (kk + 2.0 * ii) * (kk + 2.0 * ii + 1.0) / ((kk + ii + 1.0) * (ii + 1.0)) * p * q;
      }
    }
    for (int i = 0; k + 2 * i <= 15; ++i) {
      const int n = k + 2 * i;
      const unsigned long long c = binomial(n, k + i);
      const unsigned long long expect =
          static_cast<unsigned long long>(k) * c / static_cast<unsigned long long>(n);
      if (static_cast<unsigned long long>(k) * c % static_cast<unsigned long long>(n) != 0 ||
          enumerate_walks(k, n) != static_cast<long long>(expect))
        enumeration_exact = false;
    }
  }
  const bool pass = worst_table <= kTol && worst_recursion <= kTol && enumeration_exact;
  verdict(1, pass,
          "recursion vs closed form: max rel dev " + num(worst_table, 3) + " (tabulated), " +
              num(worst_recursion, 3) + " (i<=200) vs tol 1e-10; walk enumeration <=15 " +
              (enumeration_exact ? "exact" : "MISMATCH"));
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c2: Monte-Carlo race success fraction against the closed form.

int run_c2() {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  const long long trials = 1'000'000;
  const double horizon = 200.0;
  Rng rng(1, Stream::Sampling);
  long long finite = 0;
  for (long long t = 0; t < trials; ++t)
    if (std::isfinite(monte_carlo_race(rng, depth, power, horizon))) ++finite;
  const double frac = static_cast<double>(finite) / static_cast<double>(trials);
  const double target = success_probability(depth, power);  // 9/49
  const double dev = std::abs(frac - target);
  const bool pass = dev <= 0.00116;
  verdict(2, pass,
          "success fraction " + num(frac, 7) + " vs " + num(target, 7) + ", |dev| " +
              num(dev, 3) + " <= 0.00116 (3-sigma, 1e6 trials): " + (pass ? "ok" : "exceeded"));
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c3: analytic first-passage CDF against the Monte-Carlo empirical CDF.

int run_c3() {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  const long long trials = 1'000'000;
  const int grid = 200;
  Rng rng(1, Stream::Sampling);
  std::vector<long long> le(static_cast<std::size_t>(grid) + 1, 0);
  for (long long t = 0; t < trials; ++t) {
    const double time = monte_carlo_race(rng, depth, power, static_cast<double>(grid));
    if (std::isfinite(time)) {
      const int cell = std::min(grid, static_cast<int>(std::ceil(time)));
      ++le[static_cast<std::size_t>(cell)];
    }
  }
  const TransmissionTimeDistribution ttd(depth, power, 1e-12);
  double worst = 0.0;
  long long cum = 0;
  for (int s = 0; s <= grid; ++s) {
    cum += le[static_cast<std::size_t>(s)];
    const double emp = static_cast<double>(cum) / static_cast<double>(trials);
    worst = std::max(worst, std::abs(emp - ttd.cdf_at(s)));
  }
  const bool pass = worst < 0.005;
  verdict(3, pass,
          "max |empirical - analytic| CDF deviation " + num(worst, 4) +
              " over s=0..200 vs bound 0.005 (1e6 trials)");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c4: inverse-transform sampler against the normalized CDF table.

int run_c4() {
  const TransmissionTimeDistribution ttd(ConfirmationDepth(2), MinerPower(0.3, 0.7));
  const long long n = 100'000;
  Rng rng(1, Stream::Sampling);
  std::vector<long long> at(static_cast<std::size_t>(ttd.s_max()) + 1, 0);
  long long finite = 0;
  for (long long t = 0; t < n; ++t) {
    const double x = ttd.sample(rng);
    if (std::isfinite(x)) {
      ++finite;
      ++at[static_cast<std::size_t>(x)];
    }
  }
  double ks = 0.0;
  long long cum = 0;
  for (int s = 0; s <= ttd.s_max(); ++s) {
    cum += at[static_cast<std::size_t>(s)];
    const double emp = static_cast<double>(cum) / static_cast<double>(finite);
    ks = std::max(ks, std::abs(emp - ttd.cdf_at(s) / ttd.success_prob()));
  }
  const double inf_frac = 1.0 - static_cast<double>(finite) / static_cast<double>(n);
  const double inf_target = 1.0 - ttd.success_prob();
  const double sigma3 = 3.0 * std::sqrt(inf_target * (1.0 - inf_target) / static_cast<double>(n));
  const double inf_dev = std::abs(inf_frac - inf_target);
  const bool pass = ks < 0.01 && inf_dev <= sigma3;
  verdict(4, pass,
          "KS " + num(ks, 4) + " < 0.01; infinite fraction " + num(inf_frac, 5) + " vs " +
              num(inf_target, 5) + ", |dev| " + num(inf_dev, 3) + " <= " + num(sigma3, 3) +
              " (1e5 samples)");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c5: delayed recursion with all mass at lag zero equals the classical one.

int run_c5() {
  const auto delta = TransmissionTimeDistribution::degenerate(0);
  MeanFieldParams p;
  p.beta = 0.00359;
  p.alpha = 0.02166;
  p.S0 = 115.67961;
  p.I0 = 4.48387;
  p.l = 15;
  const auto classical = classical_sir_run(p, 500);
  p.ttd = &delta;
  const auto delayed = blockchain_sir_run(p, 500);
  double worst = 0.0;
  for (std::size_t t = 0; t < classical.size(); ++t) {
    worst = std::max(worst, std::abs(classical[t].S - delayed[t].S));
    worst = std::max(worst, std::abs(classical[t].I - delayed[t].I));
    worst = std::max(worst, std::abs(classical[t].R - delayed[t].R));
  }
  const bool pass = worst <= 1e-12;
  verdict(5, pass,
          "max per-step |delayed - classical| " + num(worst, 3) +
              " <= 1e-12 over 500 steps with the lag-zero table");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// Shared three-community study runner for c6/c7.

struct StudyRun {
  double peak = 0.0;
  std::optional<double> lambda_bar;
  std::vector<double> r0_community;
  std::vector<double> infected_fraction;
};

StudyRun summarize(const Trajectory& traj, int communities) {
  StudyRun out;
  const auto rows = to_rows(traj.total);
  out.peak = rows[static_cast<std::size_t>(peak_step(rows))].I;
  out.lambda_bar = mean_lambda(compute_metrics(rows));
  for (int m = 0; m < communities; ++m) {
    const auto crows = to_rows(traj.community[static_cast<std::size_t>(m)]);
    out.r0_community.push_back(reproduction_number(crows));
    const double n = crows.front().S + crows.front().I + crows.front().R;
    out.infected_fraction.push_back((n - crows.back().S) / n);
  }
  return out;
}

std::vector<StudyRun> run_study(const ScenarioConfig& cfg, bool blockchain,
                                const TransmissionTimeDistribution* ttd) {
  const CommunitySpec spec = cfg.community_spec();
  const BlockProbabilityMatrix B = cfg.block_probability();
  const SimConfig sim = cfg.sim_config(blockchain);
  std::vector<StudyRun> out;
  for (int r = 0; r < cfg.replicates; ++r) {
    Rng graph_rng(cfg.rng_seed, Stream::Graph, static_cast<std::uint64_t>(r));
    const CommunityGraph graph = generate_sbm(graph_rng, spec, B);
    const Trajectory traj = run(graph, sim, ttd, static_cast<std::uint64_t>(r));
    out.push_back(summarize(traj, spec.communities()));
  }
  return out;
}

// c6: the delayed engine flattens the epidemic against the paired baseline.

int run_c6() {
  const ScenarioConfig cfg;  // three-community study defaults, 100 replicates
  const TransmissionTimeDistribution ttd(ConfirmationDepth(cfg.k),
                                         MinerPower(cfg.mu_d, cfg.mu_h));
  const auto chain = run_study(cfg, true, &ttd);
  const auto base = run_study(cfg, false, nullptr);

  std::vector<double> peak_chain, peak_base, lam_chain, lam_base;
  for (std::size_t i = 0; i < chain.size(); ++i) {
    peak_chain.push_back(chain[i].peak);
    peak_base.push_back(base[i].peak);
    if (chain[i].lambda_bar && base[i].lambda_bar) {
      lam_chain.push_back(*chain[i].lambda_bar);
      lam_base.push_back(*base[i].lambda_bar);
    }
  }
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const double mp_chain = mean(peak_chain);
  const double mp_base = mean(peak_base);
  const double t_stat = paired_t_statistic(peak_base, peak_chain);
  const double ml_chain = mean(lam_chain);
  const double ml_base = mean(lam_base);
  // One-sided 1% critical value of the t distribution with 99 degrees of
  // freedom.
  const double t_crit = 2.3646;
  const bool pass = mp_chain < mp_base && t_stat >= t_crit && ml_chain < ml_base;
  verdict(6, pass,
          "mean peak " + num(mp_chain, 4) + " (delayed) vs " + num(mp_base, 4) +
              " (baseline), paired t " + num(t_stat, 4) + " >= " + num(t_crit, 5) +
              "; mean lambda " + num(ml_chain, 4) + " vs " + num(ml_base, 4) + " over " +
              num(static_cast<double>(lam_chain.size()), 3) + " pairs");
  return pass ? 0 : 1;
}

// c7: community-level reproduction numbers on the delayed engine.

int run_c7() {
  const ScenarioConfig cfg;
  const TransmissionTimeDistribution ttd(ConfirmationDepth(cfg.k),
                                         MinerPower(cfg.mu_d, cfg.mu_h));
  const auto runs = run_study(cfg, true, &ttd);
  const int M = 3;
  std::vector<double> mean_r0(M, 0.0);
  int majority_count = 0;
  for (const auto& r : runs) {
    for (int m = 0; m < M; ++m) mean_r0[static_cast<std::size_t>(m)] += r.r0_community[static_cast<std::size_t>(m)];
    if (r.infected_fraction[2] >= 0.95) ++majority_count;
  }
  for (double& v : mean_r0) v /= static_cast<double>(runs.size());

  const bool ordering = mean_r0[0] < mean_r0[1] && mean_r0[1] < mean_r0[2];
  const bool window = mean_r0[0] >= 1.05 && mean_r0[0] <= 1.35;
  const bool infection = 2 * majority_count > static_cast<int>(runs.size());
  const bool pass = ordering && window && infection;
  std::ostringstream detail;
  detail << "community R0 means [" << num(mean_r0[0], 4) << ", " << num(mean_r0[1], 4) << ", "
         << num(mean_r0[2], 4) << "]: ordering=" << (ordering ? "pass" : "FAIL")
         << "; window=" << (window ? "pass" : "FAIL") << " (community 1 mean " << num(mean_r0[0], 4)
         << " vs [1.05, 1.35]); infection=" << (infection ? "pass" : "FAIL") << " ("
         << majority_count << "/" << runs.size() << " runs with >=95% of community 3 infected)";
  verdict(7, pass, detail.str());
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c8: self-consistency recovery of the contact and recovery rates.

int run_c8() {
  const ParamVector truth{0.00359, 0.02166, 4.48387, 115.67961, 14.87384};
  Rng data_rng(1, Stream::Data);
  const ObservedSeries data = synthetic_series(data_rng, truth, 87);
  const PriorSupport support = PriorSupport::from_data(data);
  McmcOptions opt;
  opt.iterations = 10000;
  opt.burn_in_fraction = 0.75;
  opt.scales = ProposalScales::defaults(support);
  Rng rng(1, Stream::Proposal);
  const PosteriorSamples samples = metropolis_hastings(rng, data, opt);

  const auto column = [&](auto getter) {
    std::vector<double> v;
    for (const auto& p : samples.chain) v.push_back(getter(p));
    return v;
  };
  const auto betas = column([](const ParamVector& p) { return p.beta; });
  const auto alphas = column([](const ParamVector& p) { return p.alpha; });
  const double b_lo = quantile(betas, 0.05), b_hi = quantile(betas, 0.95);
  const double a_lo = quantile(alphas, 0.05), a_hi = quantile(alphas, 0.95);
  const bool b_in = b_lo <= truth.beta && truth.beta <= b_hi;
  const bool a_in = a_lo <= truth.alpha && truth.alpha <= a_hi;
  const bool pass = b_in && a_in;
  std::ostringstream detail;
  detail << "90% CI beta [" << num(b_lo, 4) << ", " << num(b_hi, 4) << "] contains " << truth.beta
         << ": " << (b_in ? "yes" : "no") << "; alpha [" << num(a_lo, 4) << ", " << num(a_hi, 4)
         << "] contains " << truth.alpha << ": " << (a_in ? "yes" : "no");
  if (!pass)
    detail << "; known limitation: from prior-scale starting points the fixed-scale "
              "single-parameter random walk cannot reach the concentrated posterior "
              "within the pinned 10000-iteration budget";
  verdict(8, pass, detail.str());
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c9: empirical rates on a deterministic trajectory recover the parameters.

int run_c9() {
  MeanFieldParams p;
  p.beta = 0.00359;
  p.alpha = 0.02166;
  p.S0 = 115.67961;
  p.I0 = 4.48387;
  const auto rows = to_rows(classical_sir_run(p, 87));
  double worst_b = 0.0, worst_a = 0.0;
  for (int t = 0; t + 1 < static_cast<int>(rows.size()); ++t) {
    worst_b = std::max(worst_b, std::abs(empirical_contact_rate(rows, t) - p.beta));
    worst_a = std::max(worst_a, std::abs(empirical_recovery_rate(rows, t) - p.alpha));
  }
  const bool pass = worst_b <= 1e-9 && worst_a <= 1e-9;
  verdict(9, pass,
          "max |recovered - configured| contact rate " + num(worst_b, 3) + ", recovery rate " +
              num(worst_a, 3) + ", both <= 1e-9 over 87 steps");
  return pass ? 0 : 1;
}

// ---------------------------------------------------------------------------
// c10: every subcommand is byte-deterministic under a fixed seed.

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

bool dirs_identical(const fs::path& a, const fs::path& b, std::string& why) {
  std::map<std::string, fs::path> fa, fb;
  for (const auto& e : fs::recursive_directory_iterator(a))
    if (e.is_regular_file()) fa[fs::relative(e.path(), a).string()] = e.path();
  for (const auto& e : fs::recursive_directory_iterator(b))
    if (e.is_regular_file()) fb[fs::relative(e.path(), b).string()] = e.path();
  if (fa.size() != fb.size()) {
    why = "file sets differ";
    return false;
  }
  for (const auto& [rel, path] : fa) {
    auto it = fb.find(rel);
    if (it == fb.end()) {
      why = rel + " missing on rerun";
      return false;
    }
    if (slurp(path) != slurp(it->second)) {
      why = rel + " differs between runs";
      return false;
    }
  }
  return true;
}

int run_c10() {
  const fs::path root = fs::temp_directory_path() / "determinism_check";
  fs::remove_all(root);
  fs::create_directories(root);
  std::ostringstream sink;
  bool pass = true;
  std::string why;
  int checked = 0;

  const auto compare = [&](const char* name, const fs::path& a, const fs::path& b) {
    std::string local;
    if (dirs_identical(a, b, local)) {
      ++checked;
    } else {
      pass = false;
      if (!why.empty()) why += "; ";
      why += std::string(name) + ": " + local;
    }
  };

  {
    DistributionOptions opt;
    opt.out_dir = (root / "dist_a").string();
    cmd_distribution(opt, sink);
    opt.out_dir = (root / "dist_b").string();
    cmd_distribution(opt, sink);
    compare("distribution", root / "dist_a", root / "dist_b");
  }
  {
    MeanFieldOptions opt;
    opt.blockchain = true;
    opt.horizon = 60;
    opt.out_dir = (root / "mf_a").string();
    cmd_meanfield(opt, sink);
    opt.out_dir = (root / "mf_b").string();
    cmd_meanfield(opt, sink);
    compare("meanfield", root / "mf_a", root / "mf_b");
  }
  {
    SimulateOptions opt;
    opt.config.sizes = {30, 20, 10};
    opt.config.block_matrix = {{0.3, 0.05, 0.02}, {0.05, 0.3, 0.05}, {0.02, 0.05, 0.3}};
    opt.config.contact_rates = {0.05, 0.08, 0.1};
    opt.config.recovery_rates = {0.1, 0.05, 0.02};
    opt.config.seeds_per_community = 1;
    opt.config.horizon = 40;
    opt.config.replicates = 3;
    opt.config.rng_seed = 11;
    opt.emit_graphs = true;
    opt.out_dir = (root / "sim_a").string();
    cmd_simulate(opt, sink);
    opt.out_dir = (root / "sim_b").string();
    cmd_simulate(opt, sink);
    compare("simulate", root / "sim_a", root / "sim_b");
  }
  {
    const fs::path data = root / "series.csv";
    {
      std::ofstream out(data);
      out << "t,count\n";
      ParamVector truth{0.004, 0.02, 5.0, 120.0, 10.0};
      Rng rng(1, Stream::Data);
      const auto series = synthetic_series(rng, truth, 40);
      for (int t = 0; t < series.horizon(); ++t)
        out << (t + 1) << ',' << series.y[static_cast<std::size_t>(t)] << '\n';
    }
    EstimateOptions opt;
    opt.data_path = data.string();
    opt.iterations = 2000;
    opt.out_dir = (root / "est_a").string();
    cmd_estimate(opt, sink);
    opt.out_dir = (root / "est_b").string();
    cmd_estimate(opt, sink);
    compare("estimate", root / "est_a", root / "est_b");
  }
  {
    std::ostringstream va, vb;
    cmd_validate({"ballot", 1, 1e-10}, va);
    cmd_validate({"ballot", 1, 1e-10}, vb);
    if (va.str() == vb.str() && !va.str().empty()) {
      ++checked;
    } else {
      pass = false;
      if (!why.empty()) why += "; ";
      why += "validate: report differs between runs";
    }
  }

  fs::remove_all(root);
  std::string detail = std::to_string(checked) + "/5 subcommands byte-identical on rerun";
  if (!pass) detail += " (" + why + ")";
  verdict(10, pass, detail);
  return pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  if (argc <= 1) {
    for (int i = 1; i <= 10; ++i) wanted.push_back(i);
  } else {
    for (int a = 1; a < argc; ++a) {
      const std::string arg = argv[a];
      if (arg.size() >= 2 && arg[0] == 'c') {
        const int n = std::atoi(arg.c_str() + 1);
        if (n >= 1 && n <= 10) {
          wanted.push_back(n);
          continue;
        }
      }
      std::cerr << "usage: " << argv[0] << " [c1..c10]...\n";
      return 2;
    }
  }
  int status = 0;
  for (int n : wanted) {
    int rc = 0;
    switch (n) {
      case 1: rc = run_c1(); break;
      case 2: rc = run_c2(); break;
      case 3: rc = run_c3(); break;
      case 4: rc = run_c4(); break;
      case 5: rc = run_c5(); break;
      case 6: rc = run_c6(); break;
      case 7: rc = run_c7(); break;
      case 8: rc = run_c8(); break;
      case 9: rc = run_c9(); break;
      case 10: rc = run_c10(); break;
    }
    status = std::max(status, rc);
  }
  return status;
}
