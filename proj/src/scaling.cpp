#include "qrgitf/scaling.hpp"

#include <cmath>
#include <sstream>

#include "qrgitf/errors.hpp"

namespace qrgitf::scaling {

GridSpec::GridSpec(double g_min, double g_max, int points)
    : g_min_(g_min), g_max_(g_max), points_(points) {
  if (!std::isfinite(g_min) || !std::isfinite(g_max) || !(g_min >= 0.0) || !(g_min < g_max)) {
    std::ostringstream msg;
    msg << "grid bounds must satisfy 0 <= g_min < g_max, got [" << g_min << ", " << g_max << "]";
    throw ConfigurationError(msg.str());
  }
  if (points < 3 || points % 2 == 0) {
    throw ConfigurationError("grid point count must be odd and at least 3");
  }
}

GridSpec GridSpec::default_sweep() { return {0.0, 2.5, 501}; }
GridSpec GridSpec::critical_window() { return {0.8, 1.2, 4001}; }

double GridSpec::node(int i) const {
  if (i == points_ - 1) return g_max_;
  return g_min_ + (g_max_ - g_min_) * i / (points_ - 1);
}

std::vector<double> GridSpec::nodes() const {
  std::vector<double> out(static_cast<std::size_t>(points_));
  for (int i = 0; i < points_; ++i) out[static_cast<std::size_t>(i)] = node(i);
  return out;
}

GridSpec scaling_grid(int n) {
  return n >= kRefineFromStep ? GridSpec::critical_window() : GridSpec::default_sweep();
}

std::vector<double> differentiate(std::span<const double> values, const GridSpec& grid) {
  const std::size_t size = values.size();
  if (size < 3) throw ConfigurationError("differentiate: need at least 3 values");
  if (size != static_cast<std::size_t>(grid.points())) {
    throw ConfigurationError("differentiate: value count does not match the grid");
  }
  const double h = grid.spacing();
  std::vector<double> out(size);
  out[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  for (std::size_t i = 1; i + 1 < size; ++i) out[i] = (values[i + 1] - values[i - 1]) / (2.0 * h);
  out[size - 1] = (3.0 * values[size - 1] - 4.0 * values[size - 2] + values[size - 3]) / (2.0 * h);
  return out;
}

SweepResult sweep(measures::MeasureId measure, const GridSpec& grid, int n) {
  std::vector<double> values(static_cast<std::size_t>(grid.points()));
  for (int i = 0; i < grid.points(); ++i) {
    values[static_cast<std::size_t>(i)] =
        measures::evaluate_closed(measure, rgflow::flow(grid.node(i), n)).value;
  }
  auto derivative = differentiate(values, grid);
  return {grid, n, measure, std::move(values), std::move(derivative)};
}

ScalingPoint find_extremum(const SweepResult& sweep) {
  const auto& d = sweep.derivative;
  if (d.size() < 3) throw ConfigurationError("find_extremum: derivative missing");

  std::size_t best = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (std::abs(d[i]) > std::abs(d[best])) best = i;
  }

  ScalingPoint point{sweep.n, rgflow::system_size(sweep.n), sweep.grid.node(static_cast<int>(best)),
                     std::abs(d[best]), d[best]};
  if (best == 0 || best + 1 == d.size()) {
    point.at_boundary = true;
    return point;
  }

  const double y0 = std::abs(d[best - 1]);
  const double y1 = std::abs(d[best]);
  const double y2 = std::abs(d[best + 1]);
  const double curvature = y0 - 2.0 * y1 + y2;
  if (curvature < 0.0) {
    const double offset = 0.5 * (y0 - y2) / curvature;
    point.g_ext += offset * sweep.grid.spacing();
    point.abs_deriv = y1 - 0.25 * (y0 - y2) * offset;
    point.signed_deriv = std::copysign(point.abs_deriv, d[best]);
  }
  return point;
}

ScalingFit fit_scaling(std::span<const ScalingPoint> points) {
  if (points.size() < 3) throw ConfigurationError("fit_scaling: need at least 3 points");
  const double count = static_cast<double>(points.size());

  double mean_x = 0.0;
  double mean_y = 0.0;
  for (const auto& p : points) {
    if (!(p.abs_deriv > 0.0) || !std::isfinite(p.abs_deriv)) {
      std::ostringstream msg;
      msg << "fit_scaling: non-positive |dM/dg| = " << p.abs_deriv << " at n = " << p.n;
      throw DataError(msg.str());
    }
    mean_x += std::log(static_cast<double>(p.N));
    mean_y += std::log(p.abs_deriv);
  }
  mean_x /= count;
  mean_y /= count;

  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (const auto& p : points) {
    const double dx = std::log(static_cast<double>(p.N)) - mean_x;
    const double dy = std::log(p.abs_deriv) - mean_y;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw DataError("fit_scaling: all points share one system size");

  const double slope = sxy / sxx;
  const double intercept = mean_y - slope * mean_x;
  double ss_res = 0.0;
  for (const auto& p : points) {
    const double r = std::log(p.abs_deriv) - (intercept + slope * std::log(static_cast<double>(p.N)));
    ss_res += r * r;
  }
  const double r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return {slope, intercept, r_squared, {points.begin(), points.end()}};
}

ScalingFit run_scaling(measures::MeasureId measure, std::span<const int> steps) {
  std::vector<ScalingPoint> points;
  points.reserve(steps.size());
  for (int n : steps) points.push_back(find_extremum(sweep(measure, scaling_grid(n), n)));
  return fit_scaling(points);
}

}  // namespace qrgitf::scaling
