#include "besmn/meanfield.hpp"

#include <algorithm>
#include <stdexcept>

namespace besmn {

void MeanFieldParams::validate(bool need_ttd) const {
  if (!(beta >= 0.0)) throw std::invalid_argument("meanfield: beta must be nonnegative");
  if (!(alpha >= 0.0 && alpha <= 1.0))
    throw std::invalid_argument("meanfield: alpha must lie in [0,1] in discrete form");
  if (S0 < 0.0 || I0 < 0.0 || R0_pop < 0.0)
    throw std::invalid_argument("meanfield: populations must be nonnegative");
  if (!(S0 + I0 + R0_pop > 0.0)) throw std::invalid_argument("meanfield: total population must be positive");
  if (l < 1) throw std::invalid_argument("meanfield: l must be >= 1");
  if (need_ttd && ttd == nullptr)
    throw std::invalid_argument("meanfield: delayed run needs a transmission-time distribution");
}

namespace {

// Both engines advance through this identical arithmetic so that the
// all-mass-at-lag-zero delayed run reproduces the classical one exactly.
MeanFieldPoint advance(const MeanFieldPoint& cur, double inflow_raw, double alpha) {
  const double inflow = std::min(inflow_raw, cur.S);
  const double recovered = std::min(alpha * cur.I, cur.I);
  return {cur.S - inflow, cur.I + inflow - recovered, cur.R + recovered};
}

}  // namespace

std::vector<MeanFieldPoint> classical_sir_run(const MeanFieldParams& params, int horizon) {
  if (horizon < 0) throw std::invalid_argument("classical_sir_run: horizon must be nonnegative");
  params.validate(false);
  std::vector<MeanFieldPoint> traj;
  traj.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.push_back({params.S0, params.I0, params.R0_pop});
  for (int t = 0; t < horizon; ++t) {
    const MeanFieldPoint& cur = traj.back();
    const double inflow_raw = params.beta * cur.S * cur.I;
    traj.push_back(advance(cur, inflow_raw, params.alpha));
  }
  return traj;
}

std::vector<MeanFieldPoint> blockchain_sir_run(const MeanFieldParams& params, int horizon) {
  if (horizon < 0) throw std::invalid_argument("blockchain_sir_run: horizon must be nonnegative");
  params.validate(true);
  const TransmissionTimeDistribution& ttd = *params.ttd;

  // window[d] = mass of the transmission time landing d steps after the
  // contact: the grid cells (d*l - j) for j over one step's worth of lags.
  const int j_hi = params.disjoint_lag_windows ? params.l - 1 : params.l;
  std::vector<double> window(static_cast<std::size_t>(horizon) + 1, 0.0);
  for (int d = 1; d <= horizon; ++d) {
    double w = 0.0;
    for (int j = 0; j <= j_hi; ++j) w += ttd.mass_at(d * params.l - j);
    window[static_cast<std::size_t>(d)] = w;
  }

  std::vector<MeanFieldPoint> traj;
  traj.reserve(static_cast<std::size_t>(horizon) + 1);
  traj.push_back({params.S0, params.I0, params.R0_pop});
  std::vector<double> contact_history;  // beta * S(i) * I(i) per past step
  contact_history.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) {
    const MeanFieldPoint& cur = traj.back();
    contact_history.push_back(params.beta * cur.S * cur.I);
    double inflow_raw = 0.0;
    for (int i = 0; i <= t; ++i)
      inflow_raw += contact_history[static_cast<std::size_t>(i)] *
                    window[static_cast<std::size_t>(t + 1 - i)];
    traj.push_back(advance(cur, inflow_raw, params.alpha));
  }
  return traj;
}

}  // namespace besmn
