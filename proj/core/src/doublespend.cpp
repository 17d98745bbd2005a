#include "besmn/doublespend.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace besmn {

MinerPower::MinerPower(double mu_d_in, double mu_h_in) : mu_d(mu_d_in), mu_h(mu_h_in) {
  if (!(mu_d > 0.0) || !(mu_h > 0.0))
    throw std::invalid_argument("MinerPower: rates must be positive");
}

ConfirmationDepth::ConfirmationDepth(int k_in) : k(k_in) {
  if (k < 1) throw std::invalid_argument("ConfirmationDepth: k must be >= 1");
}

double hitting_pmf(ConfirmationDepth depth, double p, int i) {
  if (!(p > 0.0 && p < 1.0)) throw std::domain_error("hitting_pmf: p must lie in (0,1)");
  if (i < 0) throw std::invalid_argument("hitting_pmf: i must be nonnegative");
  const int k = depth.k;
  const double n = static_cast<double>(k) + 2.0 * i;
  const double log_value = std::log(static_cast<double>(k)) - std::log(n) +
                           std::lgamma(n + 1.0) - std::lgamma(static_cast<double>(k + i) + 1.0) -
                           std::lgamma(static_cast<double>(i) + 1.0) +
                           (k + i) * std::log(p) + i * std::log1p(-p);
  return std::exp(log_value);
}

HittingDistribution hitting_distribution(ConfirmationDepth depth, const MinerPower& power,
                                         double tol) {
  if (!(tol > 0.0)) throw std::invalid_argument("hitting_distribution: tol must be positive");
  const int k = depth.k;
  const double p = power.win_probability();
  const double q = 1.0 - p;
  const bool subcritical = power.mu_d < power.mu_h;
  const double limit = subcritical ? std::pow(power.mu_d / power.mu_h, k) : 1.0;

  HittingDistribution dist;
  dist.k = k;
  dist.p = p;
  double g = std::pow(p, k);
  double cum = g;
  dist.g.push_back(g);
  dist.G.push_back(cum);

  // A cap keeps near-critical races from looping forever; the heavy-tailed
  // p ~ 1/2 regime converges like i^(-1/2).
  const long long cap = 1LL << 24;
  for (long long i = 0;; ++i) {
    const bool done = subcritical ? (limit - cum < tol) : (g < tol * dist.g.front());
    if (done) break;
    if (i >= cap)
      throw std::runtime_error("hitting_distribution: truncation did not converge under tol");
    const double n = static_cast<double>(k) + 2.0 * static_cast<double>(i);
    const double ratio = (n * (n + 1.0)) /
                         ((static_cast<double>(k) + i + 1.0) * (static_cast<double>(i) + 1.0)) *
                         (p * q);
    g *= ratio;
    cum += g;
    dist.g.push_back(g);
    dist.G.push_back(cum);
  }
  dist.tail_bound = subcritical ? std::max(0.0, limit - cum) : std::max(0.0, 1.0 - cum);
  return dist;
}

double success_probability(ConfirmationDepth depth, const MinerPower& power) {
  if (!(power.mu_d < power.mu_h))
    throw std::domain_error("success_probability: requires mu_d < mu_h");
  return std::pow(power.mu_d / power.mu_h, depth.k);
}

namespace {

// Shared evaluator for the two grid expressions: weight[i] is g[i] for the
// pointwise form and G[i] for the CDF. Past the truncated table the weight is
// taken as `beyond_weight`: zero for the pointwise form (true g values there
// are below the tail bound) and the converged cumulative value for the CDF.
// Poisson factors are built incrementally in log space; the j-sum stops once
// the weight-capped Poisson tail (or, past the table, twice the stored tail
// bound) drops below tol.
double race_series(double s, const std::vector<double>& weight, double weight_cap,
                   double beyond_weight, double tail_bound, int k, double mu, double tol) {
  if (s < 0.0) throw std::invalid_argument("race series: s must be nonnegative");
  if (s == 0.0) return 0.0;
  const double lambda = mu * s;
  const double log_lambda = std::log(lambda);
  double log_pois = -lambda + k * log_lambda - std::lgamma(static_cast<double>(k) + 1.0);
  // Poisson mass below j+k, tracked so the tail bound is available cheaply.
  double pois_head = 0.0;
  {
    double lp = -lambda;
    for (int m = 0; m < k; ++m) {
      pois_head += std::exp(lp);
      lp += log_lambda - std::log(static_cast<double>(m) + 1.0);
    }
  }
  const int table = static_cast<int>(weight.size());
  double acc = 0.0;
  const long long j_cap = static_cast<long long>(lambda + 12.0 * std::sqrt(lambda + 1.0)) +
                          2LL * table + 64;
  for (long long j = 0;; ++j) {
    const double pois = std::exp(log_pois);
    const int idx = static_cast<int>(j / 2);
    const double w = idx < table ? weight[static_cast<std::size_t>(idx)] : beyond_weight;
    acc += w * pois;
    pois_head += pois;
    const double pois_tail = std::max(0.0, 1.0 - pois_head);
    if (weight_cap * pois_tail < tol) break;
    if (idx >= table && 2.0 * tail_bound < tol) break;
    if (j >= j_cap) break;
    log_pois += log_lambda - std::log(static_cast<double>(j + k) + 1.0);
  }
  return acc;
}

}  // namespace

double tk_pmf(double s, const HittingDistribution& dist, const MinerPower& power, double tol) {
  // Individual g values never exceed the total mass, which caps every
  // remaining term for the stopping bound.
  const double cap = dist.G.empty() ? 1.0 : std::min(1.0, dist.G.back() + dist.tail_bound);
  return race_series(s, dist.g, cap, 0.0, dist.tail_bound, dist.k, power.total(), tol);
}

double tk_cdf(double s, const HittingDistribution& dist, const MinerPower& power, double tol) {
  const double cap = dist.G.empty() ? 1.0 : std::min(1.0, dist.G.back() + dist.tail_bound);
  const double converged = dist.G.empty() ? 0.0 : dist.G.back();
  double value = race_series(s, dist.G, cap, converged, dist.tail_bound, dist.k, power.total(), tol);
  const double upper =
      power.mu_d < power.mu_h ? std::pow(power.mu_d / power.mu_h, dist.k) : 1.0;
  return std::clamp(value, 0.0, upper);
}

TransmissionTimeDistribution::TransmissionTimeDistribution(ConfirmationDepth depth,
                                                           MinerPower power, double tol,
                                                           int s_cap)
    : power_(power), depth_(depth), tol_(tol) {
  if (!(power.mu_d < power.mu_h))
    throw std::domain_error(
        "TransmissionTimeDistribution: requires mu_d < mu_h (the infinite branch of "
        "inverse sampling is undefined otherwise)");
  if (!(tol > 0.0)) throw std::invalid_argument("TransmissionTimeDistribution: tol must be positive");
  success_ = success_probability(depth, power);
  // The grid stop compares against the closed-form success probability, so
  // the hitting table and the per-point series must be truncated strictly
  // tighter than tol; at equal tolerances their combined shortfall can keep
  // the gap above tol forever.
  const double inner_tol = tol * 1e-4;
  hitting_ = hitting_distribution(depth, power, inner_tol);
  cdf_grid_.push_back(0.0);  // no blocks mined at s = 0, so no lead of k yet
  double running = 0.0;
  for (int s = 1;; ++s) {
    if (s > s_cap)
      throw std::runtime_error("TransmissionTimeDistribution: grid cap reached before the "
                               "residual mass fell below tol");
    // Running maximum repairs sub-ulp wobble so inverse sampling sees a
    // monotone table.
    running = std::max(running, tk_cdf(static_cast<double>(s), hitting_, power_, inner_tol));
    cdf_grid_.push_back(running);
    if (success_ - running < tol) break;
  }
}

TransmissionTimeDistribution TransmissionTimeDistribution::degenerate(int s_point,
                                                                      double success) {
  if (s_point < 0) throw std::invalid_argument("degenerate: s_point must be nonnegative");
  if (!(success > 0.0 && success <= 1.0))
    throw std::invalid_argument("degenerate: success must lie in (0,1]");
  TransmissionTimeDistribution ttd;
  ttd.success_ = success;
  ttd.tol_ = 0.0;
  ttd.cdf_grid_.assign(static_cast<std::size_t>(s_point) + 1, 0.0);
  ttd.cdf_grid_.back() = success;
  ttd.hitting_.k = ttd.depth_.k;
  ttd.hitting_.p = ttd.power_.win_probability();
  return ttd;
}

double TransmissionTimeDistribution::cdf_at(int s) const {
  if (s < 0) return 0.0;
  if (s > s_max()) return cdf_grid_.back();
  return cdf_grid_[static_cast<std::size_t>(s)];
}

double TransmissionTimeDistribution::mass_at(int s) const {
  if (s < 0) return 0.0;
  if (s == 0) return cdf_grid_.front();
  return cdf_at(s) - cdf_at(s - 1);
}

double TransmissionTimeDistribution::sample(Rng& rng) const {
  const double u1 = rng.uniform01();
  if (u1 > success_) return kInfiniteTime;
  const double u2 = rng.uniform01();
  const double target = u2 * success_;
  if (target > cdf_grid_.back())
    throw std::runtime_error("sample: quantile beyond the precomputed grid; extend s_max");
  std::vector<double>::const_iterator it;
  if (target > 0.0) {
    it = std::lower_bound(cdf_grid_.begin(), cdf_grid_.end(), target);
  } else {
    // Inverse of 0 is the first grid point carrying positive mass.
    it = std::upper_bound(cdf_grid_.begin(), cdf_grid_.end(), 0.0);
  }
  return static_cast<double>(it - cdf_grid_.begin());
}

double monte_carlo_race(Rng& rng, int k, double mu_d, double mu_h, double horizon) {
  if (k < 1) throw std::invalid_argument("monte_carlo_race: k must be >= 1");
  if (mu_d < 0.0 || mu_h < 0.0 || !(mu_d + mu_h > 0.0))
    throw std::invalid_argument("monte_carlo_race: rates must be nonnegative with positive sum");
  if (!(horizon > 0.0)) throw std::invalid_argument("monte_carlo_race: horizon must be positive");
  const double mu = mu_d + mu_h;
  const double p = mu_d / mu;
  double t = 0.0;
  long long lead = 0;
  for (;;) {
    t += rng.exponential(mu);
    if (t > horizon) return kInfiniteTime;
    if (rng.uniform01() < p)
      ++lead;
    else
      --lead;
    if (lead == k) return t;
  }
}

double monte_carlo_race(Rng& rng, ConfirmationDepth depth, const MinerPower& power,
                        double horizon) {
  return monte_carlo_race(rng, depth.k, power.mu_d, power.mu_h, horizon);
}

}  // namespace besmn
