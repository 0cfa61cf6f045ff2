#pragma once

// Command-line front end. Kept in the library so tests can drive every
// subcommand without spawning processes.

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qrgitf/scaling.hpp"

namespace qrgitf::app {

enum ExitCode : int {
  kSuccess = 0,
  kVerificationFailure = 1,
  kFitQualityFailure = 2,
  kUsageError = 64,
  kIoError = 74,
};

inline constexpr double kMinimumRSquared = 0.999;

/// "a..b" (inclusive), "n", or "a,b,c". Result must be non-empty and strictly
/// ascending. Returns nullopt on malformed input.
std::optional<std::vector<int>> parse_steps(std::string_view text);

/// Measure selection: one short id, or "all".
std::optional<std::vector<measures::MeasureId>> parse_measure_selection(std::string_view text);

/// One CSV row per (measure, step, grid node), in that nesting order.
/// Header: g,step,measure,value,dvalue_dg. Numbers use 9 significant digits.
std::string sweep_csv(const std::vector<scaling::SweepResult>& sweeps);

/// Sweeps for every (measure, step) pair, evaluated concurrently when
/// `threads` > 1; the result order does not depend on the thread count.
std::vector<scaling::SweepResult> run_sweeps(const std::vector<measures::MeasureId>& selection,
                                             const scaling::GridSpec& grid,
                                             const std::vector<int>& steps, unsigned threads);

nlohmann::json scaling_json(measures::MeasureId measure, const scaling::ScalingFit& fit);

struct VerificationFailure {
  std::string check;  // measure id or "projection" / "chsh-direct"
  double g;
  double difference;
  double tolerance;
};

struct VerificationReport {
  int comparisons = 0;
  std::vector<VerificationFailure> failures;
  bool passed() const { return failures.empty(); }
};

struct VerificationTolerances {
  double closed_form = 1e-9;
  double discord = 1e-6;
  double chsh_direct = 1e-4;
  double projection = 1e-8;

  /// Every comparison uses `tol`.
  static VerificationTolerances uniform(double tol) { return {tol, tol, tol, tol}; }
};

/// Oracle-vs-closed-form comparisons for all seven measures on 101 fields in
/// [0, 2.5], the direct CHSH maximization, and the projection check at
/// g in {0.25, 0.5, 1, 2, 4}.
VerificationReport run_verification(const VerificationTolerances& tolerances);

/// Entry point shared by the executable and the tests.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qrgitf::app
