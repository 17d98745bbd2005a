#include "besmn/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "besmn/csv.hpp"

namespace besmn {

namespace {

using nlohmann::json;

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  return out;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

void write_meanfield_csv(const std::filesystem::path& path,
                         const std::vector<MeanFieldPoint>& traj) {
  auto out = open_out(path);
  out << "t,S,I,R\n";
  for (std::size_t t = 0; t < traj.size(); ++t)
    out << join_csv({fmt(static_cast<long long>(t)), fmt(traj[t].S), fmt(traj[t].I),
                     fmt(traj[t].R)})
        << '\n';
}

void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj) {
  auto out = open_out(path);
  std::vector<std::string> header{"t", "S", "I", "R"};
  const int M = static_cast<int>(traj.community.size());
  for (int m = 1; m <= M; ++m) {
    header.push_back("S_" + std::to_string(m));
    header.push_back("I_" + std::to_string(m));
    header.push_back("R_" + std::to_string(m));
  }
  out << join_csv(header) << '\n';
  for (int t = 0; t < traj.steps(); ++t) {
    std::vector<std::string> row{fmt(static_cast<long long>(t)),
                                 fmt(traj.total[static_cast<std::size_t>(t)].S),
                                 fmt(traj.total[static_cast<std::size_t>(t)].I),
                                 fmt(traj.total[static_cast<std::size_t>(t)].R)};
    for (int m = 0; m < M; ++m) {
      const TrajectoryRow& c = traj.community[static_cast<std::size_t>(m)][static_cast<std::size_t>(t)];
      row.push_back(fmt(c.S));
      row.push_back(fmt(c.I));
      row.push_back(fmt(c.R));
    }
    out << join_csv(row) << '\n';
  }
}

void write_metrics_csv(const std::filesystem::path& path, const MetricSeries& series) {
  auto out = open_out(path);
  out << "t,beta_emp,alpha_emp,lambda\n";
  for (const MetricPoint& p : series.points) {
    std::vector<std::string> row{fmt(static_cast<long long>(p.t))};
    row.push_back(p.beta_emp ? fmt(*p.beta_emp) : "");
    row.push_back(p.alpha_emp ? fmt(*p.alpha_emp) : "");
    row.push_back(p.lambda ? fmt(*p.lambda) : "");
    out << join_csv(row) << '\n';
  }
}

// nlohmann serializes non-finite numbers as null; make the intent explicit.
json json_number_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

struct RunSummary {
  int replicate = 0;
  int steps = 0;
  double peak_I = 0.0;
  int t_star = 0;
  double r0 = 0.0;
  std::optional<double> lambda_bar;
  std::vector<double> r0_community;
  std::vector<int> t_star_community;
  std::vector<double> infected_fraction;  // 1 - S_end/N_m per community
};

json to_json(const RunSummary& s) {
  json j;
  j["replicate"] = s.replicate;
  j["steps"] = s.steps;
  j["peak_I"] = s.peak_I;
  j["t_star"] = s.t_star;
  j["r0"] = json_number_or_null(s.r0);
  j["mean_lambda"] = s.lambda_bar ? json(*s.lambda_bar) : json(nullptr);
  json r0c = json::array();
  for (double v : s.r0_community) r0c.push_back(json_number_or_null(v));
  j["r0_community"] = r0c;
  j["t_star_community"] = s.t_star_community;
  j["infected_fraction"] = s.infected_fraction;
  return j;
}

RunSummary summarize_run(int replicate, const Trajectory& traj) {
  RunSummary s;
  s.replicate = replicate;
  s.steps = traj.steps();
  const std::vector<SirRow> rows = to_rows(traj.total);
  const MetricSeries series = compute_metrics(rows);
  s.t_star = series.t_star;
  s.r0 = series.r0;
  s.lambda_bar = mean_lambda(series);
  for (const TrajectoryRow& row : traj.total) s.peak_I = std::max(s.peak_I, static_cast<double>(row.I));
  for (const auto& comm : traj.community) {
    const std::vector<SirRow> crows = to_rows(comm);
    s.r0_community.push_back(reproduction_number(crows));
    s.t_star_community.push_back(peak_step(crows));
    const double n_m = crows.front().S + crows.front().I + crows.front().R;
    s.infected_fraction.push_back(1.0 - crows.back().S / n_m);
  }
  return s;
}

json aggregate_mode(const std::vector<RunSummary>& runs, int communities) {
  json agg;
  double peak_sum = 0.0;
  for (const auto& r : runs) peak_sum += r.peak_I;
  agg["mean_peak_I"] = peak_sum / static_cast<double>(runs.size());

  double lambda_sum = 0.0;
  int lambda_n = 0;
  for (const auto& r : runs)
    if (r.lambda_bar) {
      lambda_sum += *r.lambda_bar;
      ++lambda_n;
    }
  agg["mean_lambda"] = lambda_n ? json(lambda_sum / lambda_n) : json(nullptr);
  agg["lambda_defined_runs"] = lambda_n;

  json mean_r0 = json::array();
  json inf_counts = json::array();
  json mean_frac = json::array();
  for (int m = 0; m < communities; ++m) {
    double sum = 0.0;
    int infinite = 0;
    double frac = 0.0;
    for (const auto& r : runs) {
      const double v = r.r0_community[static_cast<std::size_t>(m)];
      if (std::isfinite(v))
        sum += v;
      else
        ++infinite;
      frac += r.infected_fraction[static_cast<std::size_t>(m)];
    }
    // The mean over runs is infinite as soon as one run exhausts its
    // susceptibles; report the finite-run mean alongside the count.
    mean_r0.push_back(infinite == 0
                          ? json(sum / static_cast<double>(runs.size()))
                          : json(nullptr));
    inf_counts.push_back(infinite);
    mean_frac.push_back(frac / static_cast<double>(runs.size()));
  }
  agg["mean_r0_community_finite_runs"] = mean_r0;
  agg["infinite_r0_runs"] = inf_counts;
  agg["mean_infected_fraction"] = mean_frac;
  return agg;
}

}  // namespace

int cmd_distribution(const DistributionOptions& opt, std::ostream& log) {
  const ConfirmationDepth depth(opt.k);
  const MinerPower power(opt.mu_d, opt.mu_h);
  const TransmissionTimeDistribution ttd(depth, power, opt.tol);
  const int s_hi = opt.s_max < 0 ? ttd.s_max() : opt.s_max;

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);
  {
    auto out = open_out(dir / "distribution.csv");
    out << "s,pmf,cdf\n";
    for (int s = 0; s <= s_hi; ++s) {
      const double pmf = tk_pmf(static_cast<double>(s), ttd.hitting(), power, opt.tol);
      out << join_csv({fmt(static_cast<long long>(s)), fmt(pmf), fmt(ttd.cdf_at(s))}) << '\n';
    }
  }
  json summary;
  summary["success_probability"] = ttd.success_prob();
  summary["k"] = opt.k;
  summary["mu_d"] = opt.mu_d;
  summary["mu_h"] = opt.mu_h;
  summary["s_max"] = s_hi;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  log << summary.dump() << '\n';
  log << "wrote " << (dir / "distribution.csv").string() << " (" << (s_hi + 1) << " rows)\n";
  return 0;
}

int cmd_simulate(const SimulateOptions& opt, std::ostream& log) {
  opt.config.validate();
  const std::string out_name = opt.out_dir ? *opt.out_dir : opt.config.output_directory;
  std::filesystem::create_directories(out_name);
  const std::filesystem::path dir(out_name);
  write_text(dir / "config.json", opt.config.to_json().dump(2) + "\n");

  const CommunitySpec spec = opt.config.community_spec();
  const BlockProbabilityMatrix B = opt.config.block_probability();
  const int M = spec.communities();

  const bool want_blockchain = opt.mode != EngineMode::Off;
  const bool want_baseline = opt.mode != EngineMode::On;
  std::optional<TransmissionTimeDistribution> ttd;
  if (want_blockchain)
    ttd.emplace(ConfirmationDepth(opt.config.k), MinerPower(opt.config.mu_d, opt.config.mu_h));

  json metrics;
  std::vector<RunSummary> blockchain_runs, baseline_runs;
  for (int pass = 0; pass < 2; ++pass) {
    const bool blockchain = pass == 0;
    if (blockchain && !want_blockchain) continue;
    if (!blockchain && !want_baseline) continue;
    const char* mode_name = blockchain ? "blockchain" : "baseline";
    const SimConfig cfg = opt.config.sim_config(blockchain);
    std::vector<RunSummary>& store = blockchain ? blockchain_runs : baseline_runs;
    for (int r = 0; r < opt.config.replicates; ++r) {
      Rng graph_rng(opt.config.rng_seed, Stream::Graph, static_cast<std::uint64_t>(r));
      const CommunityGraph graph = generate_sbm(graph_rng, spec, B);
      if (opt.emit_graphs && blockchain == want_blockchain) {
        auto edges = open_out(dir / ("graph_" + std::to_string(r) + ".edges"));
        write_edge_list(graph, edges);
        auto labels = open_out(dir / ("graph_" + std::to_string(r) + ".labels"));
        write_labels(graph, labels);
      }
      const Trajectory traj =
          run(graph, cfg, blockchain ? &*ttd : nullptr, static_cast<std::uint64_t>(r));
      const std::string stem = std::string(mode_name) + "_" + std::to_string(r);
      write_trajectory_csv(dir / ("trajectory_" + stem + ".csv"), traj);
      write_metrics_csv(dir / ("metrics_" + stem + ".csv"),
                        compute_metrics(to_rows(traj.total)));
      store.push_back(summarize_run(r, traj));
    }
    json mode_json;
    mode_json["replicates"] = opt.config.replicates;
    json runs = json::array();
    for (const auto& s : store) runs.push_back(to_json(s));
    mode_json["runs"] = runs;
    mode_json["aggregate"] = aggregate_mode(store, M);
    metrics["modes"][mode_name] = mode_json;
    log << mode_name << ": " << opt.config.replicates << " replicates done\n";
  }

  if (want_blockchain && want_baseline) {
    std::vector<double> peak_chain, peak_base, lam_chain, lam_base;
    for (std::size_t i = 0; i < blockchain_runs.size(); ++i) {
      peak_chain.push_back(blockchain_runs[i].peak_I);
      peak_base.push_back(baseline_runs[i].peak_I);
      if (blockchain_runs[i].lambda_bar && baseline_runs[i].lambda_bar) {
        lam_chain.push_back(*blockchain_runs[i].lambda_bar);
        lam_base.push_back(*baseline_runs[i].lambda_bar);
      }
    }
    json paired;
    double diff_sum = 0.0;
    for (std::size_t i = 0; i < peak_chain.size(); ++i)
      diff_sum += peak_base[i] - peak_chain[i];
    paired["mean_peak_reduction"] = diff_sum / static_cast<double>(peak_chain.size());
    paired["peak_t_statistic"] = json_number_or_null(paired_t_statistic(peak_base, peak_chain));
    if (!lam_chain.empty()) {
      double lc = 0.0, lb = 0.0;
      for (double v : lam_chain) lc += v;
      for (double v : lam_base) lb += v;
      paired["mean_lambda_blockchain"] = lc / static_cast<double>(lam_chain.size());
      paired["mean_lambda_baseline"] = lb / static_cast<double>(lam_base.size());
      paired["lambda_pairs"] = lam_chain.size();
    }
    metrics["paired"] = paired;
  }

  write_text(dir / "metrics.json", metrics.dump(2) + "\n");
  log << "wrote " << (dir / "metrics.json").string() << '\n';
  return 0;
}

int cmd_meanfield(const MeanFieldOptions& opt, std::ostream& log) {
  MeanFieldParams params;
  params.beta = opt.beta;
  params.alpha = opt.alpha;
  params.S0 = opt.S0;
  params.I0 = opt.I0;
  params.R0_pop = opt.R0_pop;
  params.l = opt.l;
  params.disjoint_lag_windows = opt.disjoint_lag_windows;

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);

  std::optional<TransmissionTimeDistribution> ttd;
  std::vector<MeanFieldPoint> traj;
  if (!opt.blockchain) {
    traj = classical_sir_run(params, opt.horizon);
  } else {
    if (opt.delta_at_zero)
      ttd = TransmissionTimeDistribution::degenerate(0);
    else
      ttd.emplace(ConfirmationDepth(opt.k), MinerPower(opt.mu_d, opt.mu_h), opt.tol);
    params.ttd = &*ttd;
    traj = blockchain_sir_run(params, opt.horizon);
  }
  write_meanfield_csv(dir / "trajectory.csv", traj);
  write_metrics_csv(dir / "metrics.csv", compute_metrics(to_rows(traj)));

  json config;
  config["mode"] = opt.blockchain ? "blockchain" : "classical";
  config["beta"] = opt.beta;
  config["alpha"] = opt.alpha;
  config["S0"] = opt.S0;
  config["I0"] = opt.I0;
  config["R0_pop"] = opt.R0_pop;
  config["horizon"] = opt.horizon;
  if (opt.blockchain) {
    config["l"] = opt.l;
    config["delta_at_zero"] = opt.delta_at_zero;
    config["disjoint_lag_windows"] = opt.disjoint_lag_windows;
    if (!opt.delta_at_zero) {
      config["k"] = opt.k;
      config["mu_d"] = opt.mu_d;
      config["mu_h"] = opt.mu_h;
      config["tol"] = opt.tol;
    }
  }
  write_text(dir / "config.json", config.dump(2) + "\n");
  log << "wrote " << (dir / "trajectory.csv").string() << " (" << traj.size() << " rows)\n";
  return 0;
}

namespace {

bool parse_double_field(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

bool parse_long_field(const std::string& s, long long& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtoll(s.c_str(), &end, 10);
  return end == s.c_str() + s.size();
}

std::vector<double> smooth3(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    double sum = v[i];
    int n = 1;
    if (i > 0) {
      sum += v[i - 1];
      ++n;
    }
    if (i + 1 < v.size()) {
      sum += v[i + 1];
      ++n;
    }
    out[i] = sum / n;
  }
  return out;
}

}  // namespace

ObservedSeries read_observed_series(const std::string& path, double bin_width, bool smooth) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  while (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty()) throw std::runtime_error(path + ": empty file");

  const std::vector<std::string> header = split_csv(lines.front());
  std::vector<std::string> problems;
  std::vector<double> series;  // step-indexed counts starting at the file's first step
  long long first_t = 0;

  if (header.size() == 2 && header[0] == "t" && header[1] == "count") {
    long long expect = std::numeric_limits<long long>::min();
    for (std::size_t row = 1; row < lines.size(); ++row) {
      const auto fields = split_csv(lines[row]);
      const std::string where = path + ":" + std::to_string(row + 1);
      if (fields.size() != 2) {
        problems.push_back(where + ": expected 2 fields, got " + std::to_string(fields.size()));
        continue;
      }
      long long t = 0;
      double count = 0.0;
      if (!parse_long_field(fields[0], t)) {
        problems.push_back(where + ": bad step index '" + fields[0] + "'");
        continue;
      }
      if (!parse_double_field(fields[1], count)) {
        problems.push_back(where + ": bad count '" + fields[1] + "'");
        continue;
      }
      if (count < 0.0) {
        problems.push_back(where + ": negative count");
        continue;
      }
      if (expect == std::numeric_limits<long long>::min()) {
        if (t != 0 && t != 1) {
          problems.push_back(where + ": series must start at step 0 or 1");
          continue;
        }
        first_t = t;
      } else if (t != expect) {
        problems.push_back(where + ": steps must be consecutive (expected " +
                           std::to_string(expect) + ")");
        continue;
      }
      expect = t + 1;
      series.push_back(count);
    }
  } else if (header.size() == 1 && header[0] == "timestamp") {
    if (!(bin_width > 0.0)) throw std::invalid_argument("bin width must be positive");
    std::vector<long long> bins;
    for (std::size_t row = 1; row < lines.size(); ++row) {
      const auto fields = split_csv(lines[row]);
      const std::string where = path + ":" + std::to_string(row + 1);
      if (fields.size() != 1) {
        problems.push_back(where + ": expected 1 field, got " + std::to_string(fields.size()));
        continue;
      }
      double ts = 0.0;
      if (!parse_double_field(fields[0], ts)) {
        problems.push_back(where + ": bad timestamp '" + fields[0] + "'");
        continue;
      }
      bins.push_back(static_cast<long long>(std::floor(ts / bin_width)));
    }
    if (!bins.empty()) {
      const long long lo = *std::min_element(bins.begin(), bins.end());
      const long long hi = *std::max_element(bins.begin(), bins.end());
      series.assign(static_cast<std::size_t>(hi - lo + 1), 0.0);
      for (long long b : bins) series[static_cast<std::size_t>(b - lo)] += 1.0;
      first_t = 0;
    }
  } else {
    throw std::runtime_error(path + ":1: bad header; expected 't,count' or 'timestamp'");
  }

  if (!problems.empty()) {
    std::string msg = "data ingestion failed:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw std::runtime_error(msg);
  }
  if (smooth) series = smooth3(series);

  ObservedSeries data;
  data.bin_width = bin_width;
  if (first_t == 0) {
    if (series.empty()) throw std::runtime_error(path + ": no observations");
    data.y0 = series.front();
    data.has_y0 = true;
    data.y.assign(series.begin() + 1, series.end());
  } else {
    data.y = series;
  }
  data.validate();
  return data;
}

int cmd_estimate(const EstimateOptions& opt, std::ostream& log) {
  const ObservedSeries data = read_observed_series(opt.data_path, opt.bin_width, opt.smooth);
  const PriorSupport support = PriorSupport::from_data(data);

  McmcOptions mcmc;
  mcmc.iterations = opt.iterations;
  mcmc.burn_in_fraction = opt.burn_in;
  mcmc.scales = opt.scales ? *opt.scales : ProposalScales::defaults(support);

  Rng rng(opt.seed, Stream::Proposal);
  const PosteriorSamples samples = metropolis_hastings(rng, data, mcmc);

  std::filesystem::create_directories(opt.out_dir);
  const std::filesystem::path dir(opt.out_dir);
  {
    auto out = open_out(dir / "chain.csv");
    out << "beta,alpha,I0,S0,sigma_I\n";
    for (const ParamVector& p : samples.chain)
      out << join_csv({fmt(p.beta), fmt(p.alpha), fmt(p.I0), fmt(p.S0), fmt(p.sigma_I)})
          << '\n';
  }
  json summary;
  summary["observations"] = data.horizon();
  summary["iterations"] = samples.iterations;
  summary["burn_in_fraction"] = samples.burn_in_fraction;
  summary["retained"] = samples.chain.size();
  summary["acceptance_rate"] = samples.acceptance_rate;
  summary["seed"] = opt.seed;
  json rows = json::array();
  for (const SummaryRow& row : posterior_summary(samples)) {
    json r;
    r["parameter"] = row.name;
    r["mean"] = row.mean;
    r["p5"] = row.p5;
    r["p95"] = row.p95;
    rows.push_back(r);
  }
  summary["posterior"] = rows;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  for (const SummaryRow& row : posterior_summary(samples))
    log << row.name << ": mean " << fmt(row.mean) << "  [" << fmt(row.p5) << ", "
        << fmt(row.p95) << "]\n";
  log << "acceptance rate " << fmt(samples.acceptance_rate) << "; retained "
      << samples.chain.size() << " samples\n";
  return 0;
}

double paired_t_statistic(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw std::invalid_argument("paired_t_statistic: need two samples of equal size >= 2");
  const std::size_t n = a.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = 0.0;
  for (double x : d) mean += x;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double x : d) var += (x - mean) * (x - mean);
  var /= static_cast<double>(n - 1);
  const double se = std::sqrt(var / static_cast<double>(n));
  if (se == 0.0) {
    if (mean > 0.0) return std::numeric_limits<double>::infinity();
    if (mean < 0.0) return -std::numeric_limits<double>::infinity();
    return 0.0;
  }
  return mean / se;
}

double ks_uniform(std::vector<double> sample, double lo, double hi) {
  if (sample.empty()) throw std::invalid_argument("ks_uniform: empty sample");
  if (!(hi > lo)) throw std::invalid_argument("ks_uniform: hi must exceed lo");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double ks = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = std::clamp((sample[i] - lo) / (hi - lo), 0.0, 1.0);
    ks = std::max(ks, std::abs(f - static_cast<double>(i) / n));
    ks = std::max(ks, std::abs(static_cast<double>(i + 1) / n - f));
  }
  return ks;
}

namespace {

// Exhaustive count of +/-1 sequences of length k+2i whose partial sum first
// reaches +k at the final step.
long long enumerate_first_passage(int k, int i) {
  const int n = k + 2 * i;
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

// (k/(k+2i)) C(k+2i, k+i) in exact integer arithmetic.
long long ballot_count(int k, int i) {
  const int n = k + 2 * i;
  const int r = k + i;
  // Pascal's triangle keeps everything integral.
  std::vector<std::vector<long long>> c(static_cast<std::size_t>(n) + 1);
  for (int row = 0; row <= n; ++row) {
    c[static_cast<std::size_t>(row)].assign(static_cast<std::size_t>(row) + 1, 1);
    for (int col = 1; col < row; ++col)
      c[static_cast<std::size_t>(row)][static_cast<std::size_t>(col)] =
          c[static_cast<std::size_t>(row) - 1][static_cast<std::size_t>(col) - 1] +
          c[static_cast<std::size_t>(row) - 1][static_cast<std::size_t>(col)];
  }
  const long long binom = c[static_cast<std::size_t>(n)][static_cast<std::size_t>(r)];
  if ((binom * k) % n != 0) throw std::logic_error("ballot_count: non-integral count");
  return binom * k / n;
}

int validate_race(std::uint64_t seed, std::ostream& out) {
  const ConfirmationDepth depth(2);
  const MinerPower power(0.3, 0.7);
  const double target = success_probability(depth, power);
  const long trials = 1000000;
  const double horizon = 200.0;
  const TransmissionTimeDistribution ttd(depth, power);

  Rng rng(seed, Stream::Sampling);
  std::vector<long long> finite_by_s(static_cast<std::size_t>(ttd.s_max()) + 1, 0);
  long long finite = 0;
  for (long trial = 0; trial < trials; ++trial) {
    const double t = monte_carlo_race(rng, depth, power, horizon);
    if (t == kInfiniteTime) continue;
    ++finite;
    const int cell = std::min(static_cast<int>(std::ceil(t)), ttd.s_max());
    ++finite_by_s[static_cast<std::size_t>(cell)];
  }
  const double fraction = static_cast<double>(finite) / static_cast<double>(trials);
  const double sigma = std::sqrt(target * (1.0 - target) / static_cast<double>(trials));
  const double dev = std::abs(fraction - target);
  const bool fraction_ok = dev <= 3.0 * sigma;

  double max_cdf_dev = 0.0;
  long long cum = 0;
  for (int s = 0; s <= ttd.s_max(); ++s) {
    cum += finite_by_s[static_cast<std::size_t>(s)];
    const double emp = static_cast<double>(cum) / static_cast<double>(trials);
    max_cdf_dev = std::max(max_cdf_dev, std::abs(emp - ttd.cdf_at(s)));
  }
  const bool cdf_ok = max_cdf_dev < 0.005;

  out << "race suite (k=2, mu_d=0.3, mu_h=0.7, trials=" << trials << ")\n";
  out << "  success fraction " << fmt(fraction) << " vs " << fmt(target) << " (|dev| "
      << fmt(dev) << ", 3-sigma " << fmt(3.0 * sigma) << "): "
      << (fraction_ok ? "pass" : "FAIL") << '\n';
  out << "  max CDF deviation over integer grid " << fmt(max_cdf_dev)
      << " (threshold 0.005): " << (cdf_ok ? "pass" : "FAIL") << '\n';
  return fraction_ok && cdf_ok ? 0 : 2;
}

int validate_ballot(std::ostream& out) {
  bool ok = true;
  out << "ballot suite: exhaustive first-passage counts, walk lengths <= 15\n";
  for (int k = 1; k <= 3; ++k) {
    const MinerPower power(0.3, 0.7);
    const HittingDistribution dist = hitting_distribution(ConfirmationDepth(k), power, 1e-12);
    for (int i = 0; k + 2 * i <= 15; ++i) {
      const long long enumerated = enumerate_first_passage(k, i);
      const long long closed = ballot_count(k, i);
      const double value = static_cast<double>(enumerated) * std::pow(0.3, k + i) *
                           std::pow(0.7, i);
      const double recursed = dist.g[static_cast<std::size_t>(i)];
      const bool counts_match = enumerated == closed;
      const bool values_match = std::abs(value - recursed) <= 1e-12 * std::max(1.0, recursed);
      if (!counts_match || !values_match) ok = false;
      out << "  k=" << k << " i=" << i << ": count " << enumerated
          << (counts_match ? " == " : " != ") << closed << ", recursion "
          << (values_match ? "agrees" : "DISAGREES") << '\n';
    }
  }
  out << (ok ? "  exact equality verdict: pass\n" : "  exact equality verdict: FAIL\n");
  return ok ? 0 : 2;
}

int validate_reduction(std::ostream& out) {
  const TransmissionTimeDistribution delta = TransmissionTimeDistribution::degenerate(0);
  MeanFieldParams params;
  params.beta = 0.00359;
  params.alpha = 0.02166;
  params.S0 = 115.67961;
  params.I0 = 4.48387;
  params.l = 15;
  const int horizon = 500;
  const auto classical = classical_sir_run(params, horizon);
  params.ttd = &delta;
  const auto delayed = blockchain_sir_run(params, horizon);
  double max_dev = 0.0;
  for (std::size_t t = 0; t < classical.size(); ++t) {
    max_dev = std::max(max_dev, std::abs(classical[t].S - delayed[t].S));
    max_dev = std::max(max_dev, std::abs(classical[t].I - delayed[t].I));
    max_dev = std::max(max_dev, std::abs(classical[t].R - delayed[t].R));
  }
  const bool ok = max_dev <= 1e-12;
  out << "reduction suite: all-mass-at-lag-zero delayed run vs classical, " << horizon
      << " steps\n";
  out << "  max per-component deviation " << fmt(max_dev) << " (threshold 1e-12): "
      << (ok ? "pass" : "FAIL") << '\n';
  return ok ? 0 : 2;
}

int validate_prior(std::uint64_t seed, std::ostream& out) {
  ObservedSeries data;
  data.y = {10.0, 30.0};
  const PriorSupport support = PriorSupport::from_data(data);

  McmcOptions mcmc;
  mcmc.iterations = 200000;
  mcmc.burn_in_fraction = 0.0;
  mcmc.likelihood_enabled = false;
  mcmc.scales.beta = 0.6;
  mcmc.scales.alpha = 0.6;
  mcmc.scales.I0 = 0.6 * (support.max_observed - 1.0);
  mcmc.scales.S0 = 0.6 * (support.s0_cap - support.max_observed);

  Rng rng(seed, Stream::Proposal);
  const PosteriorSamples samples = metropolis_hastings(rng, data, mcmc);

  const auto column = [&](auto getter) {
    std::vector<double> v;
    v.reserve(samples.chain.size());
    for (const auto& p : samples.chain) v.push_back(getter(p));
    return v;
  };
  struct Check {
    const char* name;
    double ks;
  };
  std::vector<Check> checks{
      {"beta", ks_uniform(column([](const ParamVector& p) { return p.beta; }), 0.0, 1.0)},
      {"alpha", ks_uniform(column([](const ParamVector& p) { return p.alpha; }), 0.0, 1.0)},
      {"I0", ks_uniform(column([](const ParamVector& p) { return p.I0; }), 1.0,
                        support.max_observed)},
      {"S0", ks_uniform(column([](const ParamVector& p) { return p.S0; }),
                        support.max_observed, support.s0_cap)},
  };
  bool ok = true;
  out << "prior suite: likelihood disabled, " << mcmc.iterations
      << " iterations, uniform-support target\n";
  for (const Check& c : checks) {
    const bool this_ok = c.ks < 0.02;
    if (!this_ok) ok = false;
    out << "  " << c.name << " KS " << fmt(c.ks) << " (threshold 0.02): "
        << (this_ok ? "pass" : "FAIL") << '\n';
  }
  out << "  acceptance rate " << fmt(samples.acceptance_rate) << '\n';
  return ok ? 0 : 2;
}

}  // namespace

int cmd_validate(const ValidateOptions& opt, std::ostream& out) {
  if (opt.suite == "race") return validate_race(opt.seed, out);
  if (opt.suite == "ballot") return validate_ballot(out);
  if (opt.suite == "reduction") return validate_reduction(out);
  if (opt.suite == "prior") return validate_prior(opt.seed, out);
  throw std::invalid_argument("unknown validation suite: " + opt.suite +
                              " (expected race|ballot|reduction|prior)");
}

}  // namespace besmn
