#pragma once

#include <vector>

#include "besmn/doublespend.hpp"

namespace besmn {

struct MeanFieldPoint {
  double S = 0.0, I = 0.0, R = 0.0;

  bool operator==(const MeanFieldPoint&) const = default;
};

// Population-level parameters. `ttd` supplies the transmission-time masses
// for the delayed recursion and may be null for the classical one; `l` is
// the block-time-per-step ratio used to index those masses.
struct MeanFieldParams {
  double beta = 0.0;
  double alpha = 0.0;
  double S0 = 0.0;
  double I0 = 0.0;
  double R0_pop = 0.0;
  int l = 1;
  const TransmissionTimeDistribution* ttd = nullptr;
  // Lag windows sum mass over j = 0..l by default, which shares the boundary
  // point between consecutive windows; this switches to the disjoint
  // j = 0..l-1 variant.
  bool disjoint_lag_windows = false;

  void validate(bool need_ttd) const;
};

// Forward-Euler susceptible/infected/recovered recursion with per-step flows
// beta*S*I and alpha*I, flows clamped so populations stay nonnegative.
std::vector<MeanFieldPoint> classical_sir_run(const MeanFieldParams& params, int horizon);

// Delayed variant: contacts made at step i convert to infections at step t+1
// with weight equal to the transmission-time mass landing in that step's lag
// window, so the new-infection flow is a convolution over the full history.
// With all mass at lag zero this reproduces classical_sir_run bit for bit.
std::vector<MeanFieldPoint> blockchain_sir_run(const MeanFieldParams& params, int horizon);

}  // namespace besmn
