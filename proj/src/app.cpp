#include "qrgitf/app.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "qrgitf/errors.hpp"

namespace qrgitf::app {

namespace {

using measures::MeasureId;

constexpr std::string_view kChshConvention = "horodecki";

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::optional<int> parse_int(std::string_view text) {
  int value = 0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) return std::nullopt;
  return value;
}

std::string_view saturation_name(rgflow::Saturation s) {
  switch (s) {
    case rgflow::Saturation::None: return "none";
    case rgflow::Saturation::Ordered: return "ordered";
    case rgflow::Saturation::Disordered: return "disordered";
  }
  return "?";
}

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

nlohmann::json load_config(const std::string& path) {
  if (path.empty()) return nlohmann::json::object();
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read config file '" + path + "'");
  try {
    auto cfg = nlohmann::json::parse(in);
    if (!cfg.is_object()) throw UsageError("config file must hold a JSON object");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("invalid config file '" + path + "': " + e.what());
  }
}

// Command-line flag if given, else the config value, else the fallback.
template <typename T>
T resolve(const CLI::Option* flag, const T& flag_value, const nlohmann::json& cfg, const char* key,
          const T& fallback) {
  if (flag->count() > 0) return flag_value;
  if (cfg.contains(key)) {
    try {
      return cfg.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
      throw UsageError(std::string("config key '") + key + "': " + e.what());
    }
  }
  return fallback;
}

// Steps may be given in a config file as "a..b" or as an array of integers.
std::string resolve_steps(const CLI::Option* flag, const std::string& flag_value,
                          const nlohmann::json& cfg, const std::string& fallback) {
  if (flag->count() > 0) return flag_value;
  if (!cfg.contains("steps")) return fallback;
  const auto& node = cfg.at("steps");
  if (node.is_string()) return node.get<std::string>();
  if (node.is_number_integer()) return std::to_string(node.get<int>());
  if (node.is_array()) {
    std::string joined;
    for (const auto& v : node) {
      if (!v.is_number_integer()) throw UsageError("config key 'steps' must hold integers");
      if (!joined.empty()) joined += ',';
      joined += std::to_string(v.get<int>());
    }
    return joined;
  }
  throw UsageError("config key 'steps' has an unsupported type");
}

std::vector<int> require_steps(const std::string& text) {
  auto steps = parse_steps(text);
  if (!steps) throw UsageError("invalid --steps '" + text + "' (expected a..b, n, or a,b,c ascending)");
  return *steps;
}

std::vector<MeasureId> require_selection(const std::string& text, bool allow_all) {
  auto selection = parse_measure_selection(text);
  if (!selection || (!allow_all && selection->size() != 1)) {
    throw UsageError("unknown measure '" + text + "' (expected neg, qd, mid, min, gqd, qde, chsh" +
                     (allow_all ? ", all)" : ")"));
  }
  return *selection;
}

int emit(const std::string& path, const std::string& payload, std::ostream& out, std::ostream& err) {
  if (path == "-") {
    out << payload;
    return kSuccess;
  }
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) {
    err << "error: cannot open '" << path << "' for writing\n";
    return kIoError;
  }
  file << payload;
  file.flush();
  if (!file) {
    err << "error: failed writing '" << path << "'\n";
    return kIoError;
  }
  return kSuccess;
}

std::string scaling_csv(const scaling::ScalingFit& fit) {
  std::string text = "n,N,g_ext,abs_deriv\n";
  for (const auto& p : fit.points) {
    text += std::to_string(p.n) + ',' + std::to_string(p.N) + ',' + format_number(p.g_ext) + ',' +
            format_number(p.abs_deriv) + '\n';
  }
  return text;
}

void check_format(const std::string& format) {
  if (format != "csv" && format != "json") {
    throw UsageError("unknown --format '" + format + "' (expected csv or json)");
  }
}

void compare(VerificationReport& report, std::string check, double g, double expected, double actual,
             double tolerance) {
  ++report.comparisons;
  const double diff = std::abs(expected - actual);
  if (!(diff <= tolerance)) report.failures.push_back({std::move(check), g, diff, tolerance});
}

}  // namespace

std::optional<std::vector<int>> parse_steps(std::string_view text) {
  std::vector<int> steps;
  if (const auto dots = text.find(".."); dots != std::string_view::npos) {
    const auto lo = parse_int(text.substr(0, dots));
    const auto hi = parse_int(text.substr(dots + 2));
    if (!lo || !hi || *lo < 0 || *hi < *lo) return std::nullopt;
    for (int n = *lo; n <= *hi; ++n) steps.push_back(n);
    return steps;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    const auto value = parse_int(piece);
    if (!value || *value < 0) return std::nullopt;
    if (!steps.empty() && *value <= steps.back()) return std::nullopt;
    steps.push_back(*value);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  if (steps.empty()) return std::nullopt;
  return steps;
}

std::optional<std::vector<MeasureId>> parse_measure_selection(std::string_view text) {
  if (text == "all") return std::vector<MeasureId>(measures::kAllMeasures.begin(), measures::kAllMeasures.end());
  if (const auto id = measures::parse_measure(text)) return std::vector<MeasureId>{*id};
  return std::nullopt;
}

std::string sweep_csv(const std::vector<scaling::SweepResult>& sweeps) {
  std::string text = "g,step,measure,value,dvalue_dg\n";
  for (const auto& s : sweeps) {
    const std::string step = std::to_string(s.n);
    const std::string_view name = measures::short_name(s.measure);
    for (int i = 0; i < s.grid.points(); ++i) {
      const auto k = static_cast<std::size_t>(i);
      text += format_number(s.grid.node(i));
      text += ',';
      text += step;
      text += ',';
      text += name;
      text += ',';
      text += format_number(s.values[k]);
      text += ',';
      text += format_number(s.derivative[k]);
      text += '\n';
    }
  }
  return text;
}

std::vector<scaling::SweepResult> run_sweeps(const std::vector<MeasureId>& selection,
                                             const scaling::GridSpec& grid, const std::vector<int>& steps,
                                             unsigned threads) {
  struct Job {
    MeasureId measure;
    int n;
  };
  std::vector<Job> jobs;
  for (auto m : selection) {
    for (int n : steps) jobs.push_back({m, n});
  }

  std::vector<std::optional<scaling::SweepResult>> slots(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < jobs.size(); k = next++) {
      slots[k] = scaling::sweep(jobs[k].measure, grid, jobs[k].n);
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(jobs.size())));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
  }

  std::vector<scaling::SweepResult> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

nlohmann::json scaling_json(MeasureId measure, const scaling::ScalingFit& fit) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : fit.points) {
    points.push_back({{"n", p.n}, {"N", p.N}, {"g_ext", p.g_ext}, {"abs_deriv", p.abs_deriv}});
  }
  nlohmann::json out;
  out["measure"] = std::string(measures::short_name(measure));
  out["points"] = points;
  out["theta"] = std::round(fit.theta * 1e6) / 1e6;
  out["intercept"] = fit.intercept;
  out["r_squared"] = fit.r_squared;
  out["chsh_convention"] = std::string(kChshConvention);
  return out;
}

VerificationReport run_verification(const VerificationTolerances& tol) {
  VerificationReport report;
  constexpr int kFields = 101;
  for (int i = 0; i < kFields; ++i) {
    const double g = 2.5 * i / (kFields - 1);
    const auto state = rgflow::ground_state(g);
    const auto& rho = state.rho;

    compare(report, "neg", g, measures::negativity_closed(g).value, measures::oracle_negativity(rho),
            tol.closed_form);
    const double entropy = measures::discord_mid_closed(g).value;
    compare(report, "qd", g, entropy, measures::oracle_discord(rho), tol.discord);
    compare(report, "mid", g, entropy, measures::oracle_mid(rho), tol.closed_form);
    const auto min_gqd = measures::oracle_min_gqd(rho);
    const double min_closed = measures::min_gqd_closed(g).value;
    compare(report, "min", g, min_closed, min_gqd.min, tol.closed_form);
    compare(report, "gqd", g, min_closed, min_gqd.gqd, tol.closed_form);
    compare(report, "qde", g, measures::quantum_deficit_closed(g).value,
            measures::oracle_quantum_deficit(rho), tol.closed_form);
    const double chsh = measures::chsh_max_closed(g).value;
    compare(report, "chsh", g, chsh, measures::oracle_chsh(rho), tol.closed_form);
    compare(report, "chsh-direct", g, chsh, measures::chsh_direct_maximization(rho).value, tol.chsh_direct);
  }

  for (double g : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    ++report.comparisons;
    try {
      const auto projection = rgflow::verify_effective_hamiltonian(rgflow::Coupling(1.0, g));
      const double diff = std::max(projection.half_gap_error(), projection.level_degeneracy_split);
      if (!(diff <= tol.projection)) report.failures.push_back({"projection", g, diff, tol.projection});
    } catch (const StructuralError&) {
      report.failures.push_back({"projection", g, std::numeric_limits<double>::infinity(), tol.projection});
    }
  }
  return report;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Quantum renormalization group analysis of the transverse-field Ising chain"};
  app.name("qrgitf");
  app.require_subcommand(1);

  // measure
  auto* measure_cmd = app.add_subcommand("measure", "Evaluate one measure at a flowed field");
  std::string m_measure;
  double m_g = 0.0;
  int m_steps = 0;
  std::string m_config;
  auto* m_measure_opt = measure_cmd->add_option("--measure", m_measure, "neg|qd|mid|min|gqd|qde|chsh");
  auto* m_g_opt = measure_cmd->add_option("--g", m_g, "Bare transverse field g >= 0");
  auto* m_steps_opt = measure_cmd->add_option("--steps", m_steps, "Number of RG steps n");
  measure_cmd->add_option("--config", m_config, "JSON config file (flags win)");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "Measure-vs-g data for one or all measures");
  std::string s_measure;
  double s_gmin = 0.0;
  double s_gmax = 2.5;
  int s_points = 501;
  std::string s_steps;
  std::string s_out;
  std::string s_format = "csv";
  unsigned s_threads = 1;
  std::string s_config;
  auto* s_measure_opt = sweep_cmd->add_option("--measure", s_measure, "Measure id or 'all'");
  auto* s_gmin_opt = sweep_cmd->add_option("--g-min", s_gmin, "Lower field bound");
  auto* s_gmax_opt = sweep_cmd->add_option("--g-max", s_gmax, "Upper field bound");
  auto* s_points_opt = sweep_cmd->add_option("--points", s_points, "Odd number of grid nodes");
  auto* s_steps_opt = sweep_cmd->add_option("--steps", s_steps, "RG steps: a..b, n or a,b,c");
  auto* s_out_opt = sweep_cmd->add_option("--out", s_out, "Output path ('-' for stdout)");
  auto* s_format_opt = sweep_cmd->add_option("--format", s_format, "csv|json");
  auto* s_threads_opt = sweep_cmd->add_option("--threads", s_threads, "Worker threads");
  sweep_cmd->add_option("--config", s_config, "JSON config file (flags win)");

  // scaling
  auto* scaling_cmd = app.add_subcommand("scaling", "Finite-size scaling fit of the derivative extremum");
  std::string c_measure;
  std::string c_steps;
  std::string c_out;
  std::string c_format = "json";
  std::string c_config;
  auto* c_measure_opt = scaling_cmd->add_option("--measure", c_measure, "Measure id");
  auto* c_steps_opt = scaling_cmd->add_option("--steps", c_steps, "RG steps (default 4..10)");
  auto* c_out_opt = scaling_cmd->add_option("--out", c_out, "Output path ('-' for stdout)");
  auto* c_format_opt = scaling_cmd->add_option("--format", c_format, "json|csv");
  scaling_cmd->add_option("--config", c_config, "JSON config file (flags win)");

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "Oracle equivalence and RG projection checks");
  double v_tol = 0.0;
  std::string v_config;
  auto* v_tol_opt = verify_cmd->add_option("--tol", v_tol, "Use this tolerance for every comparison");
  verify_cmd->add_option("--config", v_config, "JSON config file (flags win)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (measure_cmd->parsed()) {
      const auto cfg = load_config(m_config);
      const auto measure = require_selection(resolve(m_measure_opt, m_measure, cfg, "measure", std::string{}), false);
      const double g = resolve(m_g_opt, m_g, cfg, "g", std::numeric_limits<double>::quiet_NaN());
      const int n = resolve(m_steps_opt, m_steps, cfg, "steps", 0);
      if (std::isnan(g)) throw UsageError("--g is required");
      const auto flowed = rgflow::flow(g, n);
      const auto value = measures::evaluate_closed(measure.front(), flowed);
      out << "measure=" << measures::short_name(measure.front()) << " g=" << format_number(g) << " n=" << n
          << " log_g=" << format_number(flowed.log_g) << " saturation=" << saturation_name(flowed.saturated)
          << " value=" << format_number(value.value) << " units=" << measures::units_name(value.units) << '\n';
      return kSuccess;
    }

    if (sweep_cmd->parsed()) {
      const auto cfg = load_config(s_config);
      const auto selection = require_selection(resolve(s_measure_opt, s_measure, cfg, "measure", std::string{}), true);
      const scaling::GridSpec grid(resolve(s_gmin_opt, s_gmin, cfg, "g_min", 0.0),
                                   resolve(s_gmax_opt, s_gmax, cfg, "g_max", 2.5),
                                   resolve(s_points_opt, s_points, cfg, "points", 501));
      const auto steps = require_steps(resolve_steps(s_steps_opt, s_steps, cfg, "0..2"));
      const auto path = resolve(s_out_opt, s_out, cfg, "out", std::string{"-"});
      const auto format = resolve(s_format_opt, s_format, cfg, "format", std::string{"csv"});
      const auto threads = resolve(s_threads_opt, s_threads, cfg, "threads", 1u);
      check_format(format);

      const auto sweeps = run_sweeps(selection, grid, steps, threads);
      std::string payload;
      if (format == "csv") {
        payload = sweep_csv(sweeps);
      } else {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& s : sweeps) {
          for (int i = 0; i < s.grid.points(); ++i) {
            const auto k = static_cast<std::size_t>(i);
            rows.push_back({{"g", s.grid.node(i)},
                            {"step", s.n},
                            {"measure", std::string(measures::short_name(s.measure))},
                            {"value", s.values[k]},
                            {"dvalue_dg", s.derivative[k]}});
          }
        }
        payload = nlohmann::json{{"rows", rows}, {"chsh_convention", std::string(kChshConvention)}}.dump(2) + "\n";
      }
      return emit(path, payload, out, err);
    }

    if (scaling_cmd->parsed()) {
      const auto cfg = load_config(c_config);
      const auto measure = require_selection(resolve(c_measure_opt, c_measure, cfg, "measure", std::string{}), false);
      const auto steps = require_steps(resolve_steps(c_steps_opt, c_steps, cfg, "4..10"));
      const auto path = resolve(c_out_opt, c_out, cfg, "out", std::string{"-"});
      const auto format = resolve(c_format_opt, c_format, cfg, "format", std::string{"json"});
      check_format(format);
      if (steps.size() < 3) throw UsageError("scaling needs at least 3 steps");

      const auto fit = scaling::run_scaling(measure.front(), steps);
      for (const auto& p : fit.points) {
        if (p.at_boundary) {
          err << "warning: n = " << p.n << " extremum sits on the grid boundary (g = " << format_number(p.g_ext)
              << "); grid too narrow\n";
        }
      }
      const std::string payload =
          format == "json" ? scaling_json(measure.front(), fit).dump(2) + "\n" : scaling_csv(fit);
      if (const int code = emit(path, payload, out, err); code != kSuccess) return code;
      if (fit.r_squared < kMinimumRSquared) {
        err << "fit quality too low: r_squared = " << format_number(fit.r_squared) << " < " << kMinimumRSquared
            << "\n";
        return kFitQualityFailure;
      }
      return kSuccess;
    }

    if (verify_cmd->parsed()) {
      const auto cfg = load_config(v_config);
      const bool override_tol = v_tol_opt->count() > 0 || cfg.contains("tol");
      const auto tolerances = override_tol
                                  ? VerificationTolerances::uniform(resolve(v_tol_opt, v_tol, cfg, "tol", 0.0))
                                  : VerificationTolerances{};
      const auto report = run_verification(tolerances);
      for (const auto& f : report.failures) {
        out << "FAIL " << f.check << " g=" << format_number(f.g) << " |diff|=" << format_number(f.difference)
            << " tol=" << format_number(f.tolerance) << '\n';
      }
      out << "verify: " << report.comparisons << " comparisons, " << report.failures.size() << " failures\n";
      return report.passed() ? kSuccess : kVerificationFailure;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ConfigurationError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  }
  return kUsageError;
}

}  // namespace qrgitf::app
