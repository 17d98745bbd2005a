#pragma once

#include <optional>
#include <vector>

#include "besmn/abm.hpp"
#include "besmn/meanfield.hpp"

namespace besmn {

// Real-valued S/I/R counts per step; the common currency of the metric
// functions regardless of which engine produced them.
struct SirRow {
  double S = 0.0, I = 0.0, R = 0.0;
};

std::vector<SirRow> to_rows(const std::vector<MeanFieldPoint>& traj);
std::vector<SirRow> to_rows(const std::vector<TrajectoryRow>& traj);

struct MetricPoint {
  int t = 0;
  std::optional<double> beta_emp;
  std::optional<double> alpha_emp;
  std::optional<double> lambda;
};

// Per-step empirical rates with gaps where a rate is undefined, plus the
// peak step and the reproduction number read off it.
struct MetricSeries {
  std::vector<MetricPoint> points;
  int t_star = 0;
  double r0 = 0.0;
};

// Fraction of susceptibles infected per contact opportunity between t and
// t+1: -(S(t+1) - S(t)) / (S(t) I(t)). Defined only when S(t) I(t) > 0.
double empirical_contact_rate(const std::vector<SirRow>& traj, int t);

// Fraction of infected recovering between t and t+1: (R(t+1) - R(t)) / I(t).
// Defined only when I(t) > 0.
double empirical_recovery_rate(const std::vector<SirRow>& traj, int t);

// Earliest step at which I(t) attains its maximum.
int peak_step(const std::vector<SirRow>& traj);

// N / S(t*) with t* the earliest peak of I; +infinity when S(t*) = 0.
double reproduction_number(const std::vector<SirRow>& traj);

// Full per-step series: beta_emp and alpha_emp where defined, and their
// ratio lambda where additionally alpha_emp > 0; undefined points are gaps.
MetricSeries compute_metrics(const std::vector<SirRow>& traj);

// Mean of the defined lambda points; empty optional when there are none.
std::optional<double> mean_lambda(const MetricSeries& series);

}  // namespace besmn
