#include "laprl/metrics.hpp"

#include <cmath>
#include <fstream>
#include <map>

#include "laprl/error.hpp"
#include "laprl/grid_map.hpp"

namespace laprl {

double Curve::auc(long long from) const {
  double area = 0.0;
  for (size_t i = 1; i < steps.size(); ++i) {
    if (steps[i] <= from) continue;
    long long lo = std::max(steps[i - 1], from);
    double w = static_cast<double>(steps[i] - lo);
    // value at lo interpolated linearly inside the truncated trapezoid
    double span = static_cast<double>(steps[i] - steps[i - 1]);
    double v_lo = values[i - 1] +
                  (values[i] - values[i - 1]) * static_cast<double>(lo - steps[i - 1]) / span;
    area += 0.5 * (v_lo + values[i]) * w;
  }
  return area;
}

void write_curve_csv(const std::string& path, const Curve& c) {
  std::ofstream out(path);
  if (!out) throw InternalError("cannot write " + path);
  out << "step,value\n";
  for (size_t i = 0; i < c.steps.size(); ++i) {
    out << c.steps[i] << "," << c.values[i] << "\n";
  }
}

void write_aggregate_csv(const std::string& path, const std::vector<const Curve*>& curves) {
  if (curves.empty()) throw InternalError("no curves to aggregate");
  const size_t n = curves[0]->steps.size();
  for (const Curve* c : curves) {
    if (c->steps.size() != n || c->steps != curves[0]->steps) {
      throw InternalError("curves disagree on the step grid");
    }
  }
  std::ofstream out(path);
  if (!out) throw InternalError("cannot write " + path);
  out << "step,mean,std\n";
  const double m = static_cast<double>(curves.size());
  for (size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (const Curve* c : curves) mean += c->values[i];
    mean /= m;
    double var = 0.0;
    for (const Curve* c : curves) var += (c->values[i] - mean) * (c->values[i] - mean);
    var /= m;
    out << curves[0]->steps[i] << "," << mean << "," << std::sqrt(var) << "\n";
  }
}

Curve mean_curve(const std::vector<const Curve*>& curves) {
  Curve out;
  if (curves.empty()) return out;
  const size_t n = curves[0]->steps.size();
  for (size_t i = 0; i < n; ++i) {
    double mean = 0.0;
    for (const Curve* c : curves) mean += c->values[i];
    out.add(curves[0]->steps[i], mean / static_cast<double>(curves.size()));
  }
  return out;
}

void write_visitation_csv(const std::string& path, const GridMap& map,
                          const std::vector<long long>& visit_counts) {
  // visit_counts is indexed by tabular id = rank of the open cell in
  // row-major order, matching the environment's state numbering.
  std::ofstream out(path);
  if (!out) throw InternalError("cannot write " + path);
  size_t id = 0;
  for (int y = 0; y < map.height; ++y) {
    for (int x = 0; x < map.width; ++x) {
      if (x) out << ",";
      if (map.at(x, y) == '#') {
        out << -1;
      } else {
        out << (id < visit_counts.size() ? visit_counts[id] : 0);
        ++id;
      }
    }
    out << "\n";
  }
}

}  // namespace laprl
