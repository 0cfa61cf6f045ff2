// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "qrgitf/app.hpp"
#include "qrgitf/measures.hpp"
#include "qrgitf/qcore.hpp"
#include "qrgitf/rgflow.hpp"
#include "qrgitf/scaling.hpp"
#include "support/random_states.hpp"

using namespace qrgitf;
using measures::MeasureId;

namespace {

constexpr double kSaturationTol = 1e-3;
constexpr double kSaturationSeconds = 1.0;
constexpr int kSaturationSteps = 20;

constexpr double kThetaLo = 0.95;
constexpr double kThetaHi = 1.05;
constexpr double kMinRSquared = 0.999;
constexpr double kThetaSpread = 0.02;
constexpr double kScalingSeconds = 10.0;

constexpr double kCrossingTol = 1e-12;
constexpr int kCrossingMaxStep = 8;
constexpr int kDriftFromStep = 2;

constexpr double kOracleTol = 1e-9;
constexpr double kDiscordTol = 1e-6;
constexpr double kChshDirectTol = 1e-4;
constexpr double kOracleSeconds = 30.0;
constexpr int kOracleFields = 101;
constexpr double kOracleFieldMax = 2.5;

constexpr double kProjectionTol = 1e-8;

constexpr double kIdentityTol = 1e-9;

constexpr int kRandomStates = 10000;
constexpr double kBoundSlack = 1e-12;

int failures = 0;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

void report(int id, bool ok, const std::string& what, const std::string& detail) {
  std::printf("%s criterion %d: %s (%s)\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
  if (!ok) ++failures;
}

std::string fmt(const char* format, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, a);
  return buf;
}

std::string name(MeasureId id) { return std::string(measures::short_name(id)); }

void saturation() {
  struct Target {
    MeasureId id;
    double ordered;
    double disordered;
  };
  const std::vector<Target> targets{
      {MeasureId::Negativity, 0.5, 0.0}, {MeasureId::QD, 1.0, 0.0},
      {MeasureId::MID, 1.0, 0.0},        {MeasureId::QDeficit, 0.6931, 0.0},
      {MeasureId::CHSH, 2.828, 2.0},     {MeasureId::MIN, 0.5, 0.0},
      {MeasureId::GQD, 0.5, 0.0},
  };
  const Stopwatch clock;
  double worst = 0.0;
  std::string bad;
  for (const auto& t : targets) {
    const double lo = measures::evaluate_closed(t.id, rgflow::flow(0.5, kSaturationSteps)).value;
    const double hi = measures::evaluate_closed(t.id, rgflow::flow(1.5, kSaturationSteps)).value;
    const double err = std::max(std::abs(lo - t.ordered), std::abs(hi - t.disordered));
    worst = std::max(worst, err);
    if (err > kSaturationTol) bad += " " + name(t.id);
  }
  const double elapsed = clock.seconds();
  report(1, bad.empty() && elapsed < kSaturationSeconds, "saturation values at n = 20",
         "max |diff| " + fmt("%.2e", worst) + ", " + fmt("%.3f", elapsed) + " s" +
             (bad.empty() ? "" : ", off:" + bad));
}

void critical_exponent() {
  const std::vector<int> steps{4, 5, 6, 7, 8, 9, 10};
  const Stopwatch clock;
  std::vector<double> thetas;
  std::string detail;
  bool ok = true;
  for (auto id : measures::kAllMeasures) {
    const auto fit = scaling::run_scaling(id, steps);
    thetas.push_back(fit.theta);
    const bool good = fit.theta >= kThetaLo && fit.theta <= kThetaHi && fit.r_squared >= kMinRSquared;
    ok = ok && good;
    detail += name(id) + " " + fmt("%.4f", fit.theta) + "/" + fmt("%.5f", fit.r_squared) + (good ? "" : "!") + ", ";
  }
  const auto [lo, hi] = std::minmax_element(thetas.begin(), thetas.end());
  const double spread = *hi - *lo;
  const double elapsed = clock.seconds();
  ok = ok && spread <= kThetaSpread && elapsed < kScalingSeconds;
  report(2, ok, "theta in [0.95, 1.05], r^2 >= 0.999, pairwise spread <= 0.02",
         detail + "spread " + fmt("%.4f", spread) + ", " + fmt("%.2f", elapsed) + " s");
}

void critical_point() {
  const auto grid = scaling::GridSpec::default_sweep();
  const auto at_one = static_cast<std::size_t>(std::lround((1.0 - grid.g_min()) / grid.spacing()));
  bool crossing_ok = true;
  std::string drift_bad;
  std::string late_bad;
  for (auto id : measures::kAllMeasures) {
    const double reference = scaling::sweep(id, grid, 0).values[at_one];
    for (int n = 1; n <= kCrossingMaxStep; ++n) {
      if (std::abs(scaling::sweep(id, grid, n).values[at_one] - reference) > kCrossingTol) crossing_ok = false;
    }
    std::vector<double> distance;
    for (int n = kDriftFromStep; n <= kCrossingMaxStep; ++n) {
      distance.push_back(std::abs(scaling::find_extremum(scaling::sweep(id, scaling::scaling_grid(n), n)).g_ext - 1.0));
    }
    std::string broken;
    for (std::size_t k = 1; k < distance.size(); ++k) {
      if (!(distance[k] < distance[k - 1])) {
        broken += (broken.empty() ? "" : ",") + std::to_string(kDriftFromStep + static_cast<int>(k));
        if (kDriftFromStep + static_cast<int>(k) > 4) late_bad += " " + name(id);
      }
    }
    if (!broken.empty()) drift_bad += " " + name(id) + "@n=" + broken;
  }
  report(3, crossing_ok && drift_bad.empty(), "curves cross at g = 1 and |g_ext - 1| shrinks for n >= 2",
         std::string("crossing ") + (crossing_ok ? "ok" : "broken") +
             (drift_bad.empty() ? ", drift monotone" : ", drift not monotone:" + drift_bad));
  std::printf("INFO criterion 3: drift from n >= 4 is %s\n",
              late_bad.empty() ? "monotone for every measure" : ("broken for" + late_bad).c_str());
}

void oracle_equivalence() {
  const Stopwatch clock;
  double worst_closed = 0.0;
  double worst_discord = 0.0;
  double worst_direct = 0.0;
  for (int i = 0; i < kOracleFields; ++i) {
    const double g = kOracleFieldMax * i / (kOracleFields - 1);
    const auto rho = rgflow::ground_state(g).rho;
    for (auto id : measures::kAllMeasures) {
      const double diff = std::abs(measures::evaluate_oracle(id, rho) - measures::evaluate_closed(id, g).value);
      if (id == MeasureId::QD) worst_discord = std::max(worst_discord, diff);
      else worst_closed = std::max(worst_closed, diff);
    }
    worst_direct = std::max(worst_direct, std::abs(measures::chsh_direct_maximization(rho).value -
                                                   measures::chsh_max_closed(g).value));
  }
  const double elapsed = clock.seconds();
  report(4,
         worst_closed <= kOracleTol && worst_discord <= kDiscordTol && worst_direct <= kChshDirectTol &&
             elapsed < kOracleSeconds,
         "oracles match closed forms on 101 fields",
         "closed " + fmt("%.2e", worst_closed) + ", discord " + fmt("%.2e", worst_discord) + ", chsh direct " +
             fmt("%.2e", worst_direct) + ", " + fmt("%.2f", elapsed) + " s");
}

void projection() {
  double worst = 0.0;
  bool ok = true;
  for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const auto r = rgflow::verify_effective_hamiltonian(rgflow::Coupling(1.0, g));
    worst = std::max(worst, r.half_gap_error());
    ok = ok && r.passes(kProjectionTol);
  }
  report(5, ok, "effective Hamiltonian half-gap equals J' sqrt(1 + g'^2)", "max |diff| " + fmt("%.2e", worst));
}

void identities() {
  double worst = 0.0;
  for (int i = 0; i <= 250; ++i) {
    const double g = 0.01 * i;
    const auto rho = rgflow::ground_state(g).rho;
    const double ne = measures::negativity_closed(g).value;
    const double qd = measures::discord_mid_closed(g).value;
    const auto mg = measures::oracle_min_gqd(rho);
    const double s_a = qcore::von_neumann_entropy(qcore::partial_trace(rho, qcore::Subsystem::A), qcore::LogBase::Bits);
    for (double d : {mg.min - 2.0 * ne * ne, mg.gqd - 2.0 * ne * ne,
                     measures::oracle_chsh(rho) - 2.0 * std::sqrt(1.0 + 4.0 * ne * ne),
                     measures::quantum_deficit_closed(g).value - std::numbers::ln2 * qd,
                     qd - s_a, measures::oracle_mid(rho) - s_a}) {
      worst = std::max(worst, std::abs(d));
    }
  }
  report(6, worst <= kIdentityTol, "cross-measure identities on the block family", "max |diff| " + fmt("%.2e", worst));
}

void bounds() {
  std::mt19937_64 rng(20240611);
  int violations = 0;
  double max_neg = 0.0;
  double max_chsh = 0.0;
  double min_nonneg = INFINITY;
  for (int i = 0; i < kRandomStates; ++i) {
    const auto rho = testing::random_state(rng, 1 + i % 4);
    const double ne = measures::oracle_negativity(rho);
    const double chsh = measures::oracle_chsh(rho);
    const double smallest = std::min({measures::oracle_discord(rho), measures::oracle_mid(rho),
                                      measures::oracle_quantum_deficit(rho)});
    max_neg = std::max(max_neg, ne);
    max_chsh = std::max(max_chsh, chsh);
    min_nonneg = std::min(min_nonneg, smallest);
    bool ok = ne >= -kBoundSlack && ne <= 0.5 + kBoundSlack;
    ok = ok && chsh >= -kBoundSlack && chsh <= 2.0 * std::numbers::sqrt2 + kBoundSlack;
    ok = ok && smallest >= -kBoundSlack;
    for (auto id : measures::kAllMeasures) {
      ok = ok && measures::declared_range(id).contains(measures::evaluate_oracle(id, rho), kBoundSlack);
    }
    if (!ok) ++violations;
  }
  report(7, violations == 0, "oracle outputs within declared ranges on 10^4 random states",
         std::to_string(violations) + " violations, max neg " + fmt("%.6f", max_neg) + ", max chsh " +
             fmt("%.6f", max_chsh) + ", min discord/mid/deficit " + fmt("%.2e", min_nonneg));
}

}  // namespace

int main() {
  saturation();
  critical_exponent();
  critical_point();
  oracle_equivalence();
  projection();
  identities();
  bounds();
  std::printf("SKIP criterion 8: figure pixel curves and the correlation-length exponent are out of scope\n");
  std::printf("acceptance: %d of 7 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
