#include "besmn/metrics.hpp"

#include <limits>
#include <stdexcept>

namespace besmn {

std::vector<SirRow> to_rows(const std::vector<MeanFieldPoint>& traj) {
  std::vector<SirRow> rows;
  rows.reserve(traj.size());
  for (const auto& p : traj) rows.push_back({p.S, p.I, p.R});
  return rows;
}

std::vector<SirRow> to_rows(const std::vector<TrajectoryRow>& traj) {
  std::vector<SirRow> rows;
  rows.reserve(traj.size());
  for (const auto& p : traj)
    rows.push_back({static_cast<double>(p.S), static_cast<double>(p.I),
                    static_cast<double>(p.R)});
  return rows;
}

namespace {

void check_step(const std::vector<SirRow>& traj, int t) {
  if (traj.size() < 2) throw std::invalid_argument("metrics: trajectory needs at least two steps");
  if (t < 0 || t + 1 >= static_cast<int>(traj.size()))
    throw std::out_of_range("metrics: step has no successor in the trajectory");
}

}  // namespace

double empirical_contact_rate(const std::vector<SirRow>& traj, int t) {
  check_step(traj, t);
  const SirRow& cur = traj[static_cast<std::size_t>(t)];
  const SirRow& nxt = traj[static_cast<std::size_t>(t) + 1];
  if (!(cur.S > 0.0) || !(cur.I > 0.0))
    throw std::domain_error("empirical_contact_rate: undefined when S(t) I(t) = 0");
  // + 0.0 turns the negative zero of an unchanged S into plain zero.
  return -(nxt.S - cur.S) / (cur.S * cur.I) + 0.0;
}

double empirical_recovery_rate(const std::vector<SirRow>& traj, int t) {
  check_step(traj, t);
  const SirRow& cur = traj[static_cast<std::size_t>(t)];
  const SirRow& nxt = traj[static_cast<std::size_t>(t) + 1];
  if (!(cur.I > 0.0))
    throw std::domain_error("empirical_recovery_rate: undefined when I(t) = 0");
  return (nxt.R - cur.R) / cur.I;
}

int peak_step(const std::vector<SirRow>& traj) {
  if (traj.empty()) throw std::invalid_argument("peak_step: empty trajectory");
  int best = 0;
  for (int t = 1; t < static_cast<int>(traj.size()); ++t)
    if (traj[static_cast<std::size_t>(t)].I > traj[static_cast<std::size_t>(best)].I) best = t;
  return best;  // strict comparison keeps the earliest maximizer
}

double reproduction_number(const std::vector<SirRow>& traj) {
  const int ts = peak_step(traj);
  const SirRow& first = traj.front();
  const double n = first.S + first.I + first.R;
  const double s_peak = traj[static_cast<std::size_t>(ts)].S;
  if (s_peak == 0.0) return std::numeric_limits<double>::infinity();
  return n / s_peak;
}

MetricSeries compute_metrics(const std::vector<SirRow>& traj) {
  if (traj.empty()) throw std::invalid_argument("compute_metrics: empty trajectory");
  MetricSeries series;
  for (int t = 0; t + 1 < static_cast<int>(traj.size()); ++t) {
    const SirRow& cur = traj[static_cast<std::size_t>(t)];
    MetricPoint point;
    point.t = t;
    if (cur.S > 0.0 && cur.I > 0.0) point.beta_emp = empirical_contact_rate(traj, t);
    if (cur.I > 0.0) point.alpha_emp = empirical_recovery_rate(traj, t);
    if (point.beta_emp && point.alpha_emp && *point.alpha_emp > 0.0)
      point.lambda = *point.beta_emp / *point.alpha_emp;
    series.points.push_back(point);
  }
  series.t_star = peak_step(traj);
  series.r0 = reproduction_number(traj);
  return series;
}

std::optional<double> mean_lambda(const MetricSeries& series) {
  double sum = 0.0;
  int count = 0;
  for (const auto& p : series.points)
    if (p.lambda) {
      sum += *p.lambda;
      ++count;
    }
  if (count == 0) return std::nullopt;
  return sum / count;
}

}  // namespace besmn
