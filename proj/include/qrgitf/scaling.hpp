#pragma once

// Finite-size scaling of the renormalized measures: sweeps over the bare
// field, finite-difference derivatives, the location of the steepest descent
// and a log-log fit |dM/dg|_ext ~ N^theta.

#include <cstdint>
#include <span>
#include <vector>

#include "qrgitf/measures.hpp"

namespace qrgitf::scaling {

/// Evenly spaced nodes g_min + (g_max - g_min) i / (points - 1).
class GridSpec {
 public:
  /// Throws ConfigurationError unless 0 <= g_min < g_max, points >= 3 and odd.
  GridSpec(double g_min, double g_max, int points);

  /// [0, 2.5] with 501 nodes.
  static GridSpec default_sweep();
  /// [0.8, 1.2] with 4001 nodes; used by scaling runs at large step counts.
  static GridSpec critical_window();

  double g_min() const noexcept { return g_min_; }
  double g_max() const noexcept { return g_max_; }
  int points() const noexcept { return points_; }
  double spacing() const noexcept { return (g_max_ - g_min_) / (points_ - 1); }
  double node(int i) const;
  std::vector<double> nodes() const;

 private:
  double g_min_;
  double g_max_;
  int points_;
};

/// Steps at and above this count switch scaling runs to the critical window.
inline constexpr int kRefineFromStep = 8;

/// Grid used by scaling runs for a given step.
GridSpec scaling_grid(int n);

struct SweepResult {
  GridSpec grid;
  int n;
  measures::MeasureId measure;
  std::vector<double> values;
  std::vector<double> derivative;
};

/// Closed form at flow(g, n) for every node, plus its finite-difference derivative.
SweepResult sweep(measures::MeasureId measure, const GridSpec& grid, int n);

/// Central differences inside, second-order one-sided differences at both ends.
/// Throws ConfigurationError when fewer than 3 values or a size mismatch.
std::vector<double> differentiate(std::span<const double> values, const GridSpec& grid);

struct ScalingPoint {
  int n;
  std::uint64_t N;          // 2^(n+1)
  double g_ext;             // location of max |dM/dg|
  double abs_deriv;         // |dM/dg| there
  double signed_deriv;      // dM/dg there
  bool at_boundary = false; // extremum on the first/last node: grid too narrow
};

/// Max |derivative| node, refined by a parabola through it and its neighbours.
ScalingPoint find_extremum(const SweepResult& sweep);

struct ScalingFit {
  double theta;
  double intercept;
  double r_squared;
  std::vector<ScalingPoint> points;
};

/// Least squares line through (ln N, ln abs_deriv); theta is the slope.
/// Throws ConfigurationError for fewer than 3 points and DataError for any abs_deriv <= 0.
ScalingFit fit_scaling(std::span<const ScalingPoint> points);

/// Sweep, locate and fit for each step in `steps`, using scaling_grid(n).
ScalingFit run_scaling(measures::MeasureId measure, std::span<const int> steps);

}  // namespace qrgitf::scaling
