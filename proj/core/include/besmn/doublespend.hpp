#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "besmn/random.hpp"

namespace besmn {

// Block production modeled as two independent Poisson processes: dishonest
// miners at rate mu_d, honest miners at rate mu_h. Each mined block is
// dishonest with probability p = mu_d / (mu_d + mu_h).
struct MinerPower {
  double mu_d;
  double mu_h;

  MinerPower(double mu_d_in, double mu_h_in);

  double total() const { return mu_d + mu_h; }
  double win_probability() const { return mu_d / (mu_d + mu_h); }
};

// Number of successive confirming blocks required before content is final.
struct ConfirmationDepth {
  int k;
  explicit ConfirmationDepth(int k_in);
};

// Distribution of the round count N_k at which the dishonest chain first
// leads by k. Support is {k, k+2, k+4, ...}; g[i] = P(N_k = k + 2i) and
// G[i] is its running sum. When mu_d < mu_h the total mass is
// (mu_d/mu_h)^k < 1: the lead may never be reached.
struct HittingDistribution {
  int k = 0;
  double p = 0.0;
  std::vector<double> g;
  std::vector<double> G;
  double tail_bound = 0.0;

  int max_index() const { return static_cast<int>(g.size()) - 1; }
};

// Closed form for P(N_k = k+2i): (k/(k+2i)) C(k+2i, k+i) p^(k+i) (1-p)^i,
// evaluated in log space so large i does not overflow.
double hitting_pmf(ConfirmationDepth depth, double p, int i);

// Builds g via g(0) = p^k and the term-ratio recursion
// g(i+1)/g(i) = (k+2i)(k+2i+1) / ((k+i+1)(i+1)) * p(1-p).
// Truncation: residual mass below `tol` when mu_d < mu_h, else until
// g(i) < tol * g(0).
HittingDistribution hitting_distribution(ConfirmationDepth depth, const MinerPower& power,
                                         double tol);

// Probability that the dishonest lead ever reaches k: (mu_d/mu_h)^k.
// Requires mu_d < mu_h; the geometric-limit argument fails otherwise.
double success_probability(ConfirmationDepth depth, const MinerPower& power);

// Pointwise value of the first-passage-time expression
//   sum_j g(floor(j/2)) e^(-mu s) (mu s)^(j+k) / (j+k)!
// on the discrete block-time grid. Note this expression equals the
// probability that the race is decided at exactly the block count present at
// time s; summed over the grid it does not total the success probability
// (mass at s is read off the CDF below instead).
double tk_pmf(double s, const HittingDistribution& dist, const MinerPower& power,
              double tol = 1e-10);

// CDF of the first-passage time T_k at time s:
//   sum_j G(floor(j/2)) e^(-mu s) (mu s)^(j+k) / (j+k)!
// clamped to [0, success_probability].
double tk_cdf(double s, const HittingDistribution& dist, const MinerPower& power,
              double tol = 1e-10);

// Precomputed transmission-time table: monotone CDF values of T_k at integer
// block times s = 0..s_max, where s_max is the first grid point whose
// residual mass is below tol. Samples are drawn by inverse transform, with
// an explicit infinite branch for races that never finish.
class TransmissionTimeDistribution {
 public:
  TransmissionTimeDistribution(ConfirmationDepth depth, MinerPower power, double tol = 1e-10,
                               int s_cap = 200000);

  // Synthetic table with all probability mass at one grid point; used by the
  // reduction and delayed-equivalence checks. The success branch probability
  // can be forced (default: certain transmission).
  static TransmissionTimeDistribution degenerate(int s_point, double success = 1.0);

  double success_prob() const { return success_; }
  int s_max() const { return static_cast<int>(cdf_grid_.size()) - 1; }
  double cdf_at(int s) const;
  // Probability mass on the grid cell at s, as a CDF first difference.
  double mass_at(int s) const;
  const std::vector<double>& cdf_grid() const { return cdf_grid_; }
  const MinerPower& power() const { return power_; }
  const ConfirmationDepth& depth() const { return depth_; }
  const HittingDistribution& hitting() const { return hitting_; }
  double tolerance() const { return tol_; }

  // Inverse sampling: U1 decides between a finite race and an endless one;
  // U2 inverts the normalized CDF on the grid. Returns +infinity for the
  // endless branch; throws if the table is too short for the drawn quantile.
  double sample(Rng& rng) const;

 private:
  TransmissionTimeDistribution() : power_(1.0, 2.0), depth_(1) {}

  MinerPower power_;
  ConfirmationDepth depth_;
  HittingDistribution hitting_;
  std::vector<double> cdf_grid_;
  double success_ = 0.0;
  double tol_ = 0.0;
};

// Direct simulation of the mining race: exponential waits of the superposed
// process, each event dishonest with probability mu_d/(mu_d+mu_h); returns
// the first time the dishonest lead reaches k, or +infinity if the horizon
// passes first. Rates may individually be zero here so degenerate races are
// expressible; the MinerPower overload applies the usual validation.
double monte_carlo_race(Rng& rng, int k, double mu_d, double mu_h, double horizon);
double monte_carlo_race(Rng& rng, ConfirmationDepth depth, const MinerPower& power,
                        double horizon);

constexpr double kInfiniteTime = std::numeric_limits<double>::infinity();

}  // namespace besmn
