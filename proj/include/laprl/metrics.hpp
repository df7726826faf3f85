#pragma once

#include <string>
#include <vector>

namespace laprl {

class GridMap;

// A sampled time series: one (step, value) point per evaluation interval.
struct Curve {
  std::vector<long long> steps;
  std::vector<double> values;

  void add(long long step, double v) {
    steps.push_back(step);
    values.push_back(v);
  }
  // Area under the curve via trapezoids, restricted to steps >= from.
  double auc(long long from = 0) const;
};

struct RunMetrics {
  Curve coverage;     // fraction of states visited at least once
  Curve ep_return;    // trailing mean return over recent episodes
  Curve main_loss;    // most recent main-learner loss at sample time
  Curve repr_loss;    // most recent representation loss at sample time
  std::vector<long long> visit_counts;  // per tabular state id
};

void write_curve_csv(const std::string& path, const Curve& c);

// Rows: step, mean, std (population). All curves must share a step grid.
void write_aggregate_csv(const std::string& path, const std::vector<const Curve*>& curves);

Curve mean_curve(const std::vector<const Curve*>& curves);

// Heatmap aligned with the map grid: walls are -1, floors hold counts.
void write_visitation_csv(const std::string& path, const GridMap& map,
                          const std::vector<long long>& visit_counts);

}  // namespace laprl
