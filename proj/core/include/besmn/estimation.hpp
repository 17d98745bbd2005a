#pragma once

#include <string>
#include <vector>

#include "besmn/random.hpp"

namespace besmn {

// Binned infected-count series. y[j] is the observation at step j+1; the
// step-0 value, when the source provides one, is kept separately because the
// initial infected count is a fitted parameter, not data the likelihood sees.
struct ObservedSeries {
  std::vector<double> y;
  double y0 = 0.0;
  bool has_y0 = false;
  double bin_width = 1.0;

  int horizon() const { return static_cast<int>(y.size()); }
  double max_observed() const;

  void validate() const;
};

// Psi = {beta, alpha, I(0), S(0), sigma_I}.
struct ParamVector {
  double beta = 0.0;
  double alpha = 0.0;
  double I0 = 0.0;
  double S0 = 0.0;
  double sigma_I = 1.0;
};

// Uniform prior supports: beta, alpha in (0,1); I0 in [1, max observed];
// S0 in [max observed, s0_cap]; sigma_I carries the scale-invariant
// 1/sigma prior.
struct PriorSupport {
  double max_observed = 0.0;
  double s0_cap = 40000.0;

  static PriorSupport from_data(const ObservedSeries& data, double s0_cap = 40000.0);
  bool contains(const ParamVector& p) const;
};

struct PosteriorSamples {
  std::vector<ParamVector> chain;  // post burn-in, one entry per iteration
  double acceptance_rate = 0.0;
  long iterations = 0;
  double burn_in_fraction = 0.0;
};

// Deterministic infected-count forecast: S and I iterated jointly with flows
// beta*S*I (clamped to S) and alpha*I; returns I(1)..I(T).
std::vector<double> forward_infected(const ParamVector& params, int T);

// Gaussian log-likelihood of the observations around the forecast with
// standard deviation sigma_I, plus the 1/sigma prior term; -infinity outside
// the prior support. Never throws on bad parameter values.
double log_posterior(const ParamVector& params, const ObservedSeries& data,
                     const PriorSupport& support);

// Per-parameter random-walk standard deviations; sigma_I is proposed in log
// space so its scale prior stays invariant.
struct ProposalScales {
  double beta = 0.02;
  double alpha = 0.02;
  double I0 = 1.0;
  double S0 = 800.0;
  double log_sigma = 0.25;

  // 2% of each prior range.
  static ProposalScales defaults(const PriorSupport& support);
};

struct McmcOptions {
  long iterations = 10000;
  double burn_in_fraction = 0.75;
  ProposalScales scales;
  // When false the likelihood is dropped and the chain targets the priors
  // alone (sigma_I held fixed, its prior being improper by itself); this
  // exercises the proposal/acceptance machinery against a known target.
  bool likelihood_enabled = true;
  int init_attempts = 1000;
};

// Component-wise Gaussian random-walk Metropolis, one parameter per
// iteration in round-robin order (beta, alpha, I0, S0, sigma_I). The chain
// is initialized from prior draws until the target is finite. Records the
// state after every iteration; the first burn_in fraction is discarded.
PosteriorSamples metropolis_hastings(Rng& rng, const ObservedSeries& data,
                                     const McmcOptions& options);

struct SummaryRow {
  std::string name;
  double mean = 0.0;
  double p5 = 0.0;
  double p95 = 0.0;
};

// Mean and empirical 5th/95th percentiles for each parameter.
std::vector<SummaryRow> posterior_summary(const PosteriorSamples& samples);

// Forecast at `truth` plus Gaussian noise at truth.sigma_I, clamped to
// nonnegative counts; the self-consistency fixture for recovery tests.
ObservedSeries synthetic_series(Rng& rng, const ParamVector& truth, int T);

// Linear-interpolation empirical quantile (q in [0,1]) of a sample.
double quantile(std::vector<double> values, double q);

}  // namespace besmn
