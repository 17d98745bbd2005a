#include "besmn/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace besmn {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogTwoPi = 1.8378770664093454836;
}  // namespace

double ObservedSeries::max_observed() const {
  double best = has_y0 ? y0 : kNegInf;
  for (double v : y) best = std::max(best, v);
  return best;
}

void ObservedSeries::validate() const {
  if (static_cast<int>(y.size()) < 2)
    throw std::invalid_argument("ObservedSeries: need at least two observations");
  if (has_y0 && y0 < 0.0) throw std::invalid_argument("ObservedSeries: negative count");
  for (double v : y)
    if (v < 0.0) throw std::invalid_argument("ObservedSeries: negative count");
  if (!(bin_width > 0.0)) throw std::invalid_argument("ObservedSeries: bin width must be positive");
}

PriorSupport PriorSupport::from_data(const ObservedSeries& data, double s0_cap) {
  data.validate();
  PriorSupport s;
  s.max_observed = data.max_observed();
  s.s0_cap = s0_cap;
  if (!(s.max_observed >= 1.0))
    throw std::invalid_argument("PriorSupport: series maximum must be >= 1 for a nonempty I0 range");
  return s;
}

bool PriorSupport::contains(const ParamVector& p) const {
  return p.beta > 0.0 && p.beta < 1.0 && p.alpha > 0.0 && p.alpha < 1.0 && p.I0 >= 1.0 &&
         p.I0 <= max_observed && p.S0 >= max_observed && p.S0 <= s0_cap && p.sigma_I > 0.0;
}

std::vector<double> forward_infected(const ParamVector& params, int T) {
  if (T < 1) throw std::invalid_argument("forward_infected: T must be >= 1");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(T));
  double S = params.S0;
  double I = params.I0;
  for (int t = 1; t <= T; ++t) {
    const double flow = std::min(params.beta * S * I, S);
    const double next_I = std::max(0.0, I + flow - params.alpha * I);
    S -= flow;
    I = next_I;
    out.push_back(I);
  }
  return out;
}

double log_posterior(const ParamVector& params, const ObservedSeries& data,
                     const PriorSupport& support) {
  if (!support.contains(params)) return kNegInf;
  const std::vector<double> model = forward_infected(params, data.horizon());
  double loglik = 0.0;
  const double sigma = params.sigma_I;
  const double log_sigma = std::log(sigma);
  for (std::size_t t = 0; t < model.size(); ++t) {
    const double r = (data.y[t] - model[t]) / sigma;
    loglik += -0.5 * kLogTwoPi - log_sigma - 0.5 * r * r;
  }
  if (std::isnan(loglik)) return kNegInf;
  // Flat priors contribute a constant; the sigma prior contributes 1/sigma.
  return loglik - log_sigma;
}

ProposalScales ProposalScales::defaults(const PriorSupport& support) {
  ProposalScales s;
  s.beta = 0.02;
  s.alpha = 0.02;
  s.I0 = 0.02 * std::max(0.0, support.max_observed - 1.0);
  s.S0 = 0.02 * std::max(0.0, support.s0_cap - support.max_observed);
  s.log_sigma = 0.25;
  if (s.I0 == 0.0) s.I0 = 0.01;
  if (s.S0 == 0.0) s.S0 = 0.01;
  return s;
}

namespace {

// Prior-only target: uniform-support indicator. Parameters inside the
// support score 0, outside -infinity; sigma is excluded (held fixed).
double prior_only_target(const ParamVector& p, const PriorSupport& support) {
  return support.contains(p) ? 0.0 : kNegInf;
}

ParamVector draw_from_priors(Rng& rng, const PriorSupport& support, double sigma_init) {
  ParamVector p;
  p.beta = rng.uniform01();
  p.alpha = rng.uniform01();
  p.I0 = 1.0 + rng.uniform01() * (support.max_observed - 1.0);
  p.S0 = support.max_observed + rng.uniform01() * (support.s0_cap - support.max_observed);
  p.sigma_I = sigma_init;
  return p;
}

double series_sd(const ObservedSeries& data) {
  double mean = 0.0;
  for (double v : data.y) mean += v;
  mean /= static_cast<double>(data.y.size());
  double var = 0.0;
  for (double v : data.y) var += (v - mean) * (v - mean);
  var /= static_cast<double>(data.y.size());
  return std::sqrt(var);
}

}  // namespace

PosteriorSamples metropolis_hastings(Rng& rng, const ObservedSeries& data,
                                     const McmcOptions& options) {
  if (options.iterations < 1)
    throw std::invalid_argument("metropolis_hastings: iterations must be >= 1");
  if (!(options.burn_in_fraction >= 0.0 && options.burn_in_fraction < 1.0))
    throw std::invalid_argument("metropolis_hastings: burn-in fraction must lie in [0,1)");
  data.validate();
  const PriorSupport support = PriorSupport::from_data(data);

  // The scale prior is improper, so sigma gets a deterministic data-scaled
  // start rather than a prior draw.
  const double sigma_init = std::max(1.0, series_sd(data));
  auto target = [&](const ParamVector& p) {
    return options.likelihood_enabled ? log_posterior(p, data, support)
                                      : prior_only_target(p, support);
  };

  ParamVector cur;
  double cur_lp = kNegInf;
  bool initialized = false;
  for (int attempt = 0; attempt < options.init_attempts; ++attempt) {
    cur = draw_from_priors(rng, support, sigma_init);
    cur_lp = target(cur);
    if (cur_lp > kNegInf) {
      initialized = true;
      break;
    }
  }
  if (!initialized)
    throw std::runtime_error("metropolis_hastings: no valid starting point within the prior "
                             "support after bounded retries");

  const int cycle = options.likelihood_enabled ? 5 : 4;
  std::vector<ParamVector> chain;
  chain.reserve(static_cast<std::size_t>(options.iterations));
  long accepted = 0;
  for (long iter = 0; iter < options.iterations; ++iter) {
    const int which = static_cast<int>(iter % cycle);
    ParamVector prop = cur;
    double log_jacobian = 0.0;
    switch (which) {
      case 0: prop.beta = cur.beta + options.scales.beta * rng.normal(); break;
      case 1: prop.alpha = cur.alpha + options.scales.alpha * rng.normal(); break;
      case 2: prop.I0 = cur.I0 + options.scales.I0 * rng.normal(); break;
      case 3: prop.S0 = cur.S0 + options.scales.S0 * rng.normal(); break;
      default: {
        // Log-space walk: the Jacobian log(sigma'/sigma) cancels the 1/sigma
        // prior, leaving a flat walk in log sigma weighted by the likelihood.
        const double log_prop = std::log(cur.sigma_I) + options.scales.log_sigma * rng.normal();
        prop.sigma_I = std::exp(log_prop);
        log_jacobian = log_prop - std::log(cur.sigma_I);
        break;
      }
    }
    const double prop_lp = target(prop);
    const double log_ratio = prop_lp - cur_lp + log_jacobian;
    if (prop_lp > kNegInf && std::log(rng.uniform_pos()) < log_ratio) {
      cur = prop;
      cur_lp = prop_lp;
      ++accepted;
    }
    chain.push_back(cur);
  }

  const long burn = static_cast<long>(static_cast<double>(options.iterations) *
                                      options.burn_in_fraction);
  PosteriorSamples out;
  out.chain.assign(chain.begin() + burn, chain.end());
  out.acceptance_rate = static_cast<double>(accepted) / static_cast<double>(options.iterations);
  out.iterations = options.iterations;
  out.burn_in_fraction = options.burn_in_fraction;
  return out;
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw std::invalid_argument("quantile: q must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

std::vector<SummaryRow> posterior_summary(const PosteriorSamples& samples) {
  if (samples.chain.empty()) throw std::invalid_argument("posterior_summary: empty chain");
  const auto field = [&](auto getter) {
    std::vector<double> v;
    v.reserve(samples.chain.size());
    for (const auto& p : samples.chain) v.push_back(getter(p));
    return v;
  };
  std::vector<std::pair<std::string, std::vector<double>>> columns{
      {"beta", field([](const ParamVector& p) { return p.beta; })},
      {"alpha", field([](const ParamVector& p) { return p.alpha; })},
      {"I0", field([](const ParamVector& p) { return p.I0; })},
      {"S0", field([](const ParamVector& p) { return p.S0; })},
      {"sigma_I", field([](const ParamVector& p) { return p.sigma_I; })},
  };
  std::vector<SummaryRow> rows;
  for (auto& [name, v] : columns) {
    SummaryRow row;
    row.name = name;
    double sum = 0.0;
    for (double x : v) sum += x;
    row.mean = sum / static_cast<double>(v.size());
    row.p5 = quantile(v, 0.05);
    row.p95 = quantile(v, 0.95);
    rows.push_back(row);
  }
  return rows;
}

ObservedSeries synthetic_series(Rng& rng, const ParamVector& truth, int T) {
  if (T < 2) throw std::invalid_argument("synthetic_series: T must be >= 2");
  const std::vector<double> model = forward_infected(truth, T);
  ObservedSeries data;
  data.y.reserve(model.size());
  for (double m : model) data.y.push_back(std::max(0.0, m + truth.sigma_I * rng.normal()));
  data.has_y0 = false;
  return data;
}

}  // namespace besmn
