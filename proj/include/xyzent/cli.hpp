#pragma once

// Command-line front end: eval, sweep, critical, figure, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 usage or parameter error.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "criticality.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "sweep.hpp"
#include "thermal.hpp"
#include "verify.hpp"

namespace xyzent::cli {

inline constexpr int exit_ok = 0;
inline constexpr int exit_verify_failed = 1;
inline constexpr int exit_usage = 2;

/// Raised for bad user input; carries the message shown on stderr.
class UsageError : public Error {
public:
  using Error::Error;
};

struct CliConfig {
  ModelParams params;
  double T = 1.0;
  bool zero_temperature = false;
  std::vector<std::string> axes;
  std::string out;
  std::string format = "csv";
  bool json = false;
  std::string config;
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-10;
  double t_max = 10.0;
  std::string critical_target;
  std::string figure_name;
};

/// Parses NAME:START:STOP:COUNT.
inline AxisSpec parse_axis(const std::string& text) {
  const std::string grammar = "expected NAME:START:STOP:COUNT with NAME in {J,gamma,Jz,B,b,T}";
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string piece; std::getline(ss, piece, ':');) parts.push_back(piece);
  if (parts.size() != 4) throw UsageError("--axis '" + text + "': " + grammar);

  const auto param = parse_parameter(parts[0]);
  if (!param) throw UsageError("--axis '" + text + "': unknown parameter; " + grammar);
  AxisSpec a;
  a.parameter = *param;
  try {
    std::size_t used = 0;
    a.start = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("start");
    a.stop = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("stop");
    a.count = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("count");
  } catch (const std::exception&) {
    throw UsageError("--axis '" + text + "': bad number; " + grammar);
  }
  if (!std::isfinite(a.start) || !std::isfinite(a.stop) || !(a.start < a.stop))
    throw UsageError("--axis '" + text + "': need START < STOP; " + grammar);
  if (a.count < 2) throw UsageError("--axis '" + text + "': COUNT must be >= 2; " + grammar);
  return a;
}

namespace detail {

inline void check_params(const CliConfig& c) {
  const std::pair<const char*, double> fields[] = {{"--J", c.params.J},   {"--gamma", c.params.gamma},
                                                   {"--Jz", c.params.Jz}, {"--B", c.params.B},
                                                   {"--b", c.params.b},   {"--T", c.T}};
  for (const auto& [flag, v] : fields)
    if (!std::isfinite(v)) throw UsageError(std::string(flag) + " must be a finite number");
}

inline std::optional<Temperature> temperature_of(const CliConfig& c) {
  if (c.zero_temperature) return std::nullopt;
  if (!(c.T > 0)) throw UsageError("--T must be > 0 (pass --zero-temperature for T = 0)");
  return Temperature::from_T(c.T);
}

inline nlohmann::json state_json(const GibbsXState& s) {
  return {{"mu_plus", s.mu_plus}, {"mu_minus", s.mu_minus}, {"omega1", s.omega1},
          {"omega2", s.omega2},   {"z", s.z},               {"v", s.v}};
}

inline nlohmann::json params_json(const ModelParams& p) {
  return {{"J", p.J}, {"gamma", p.gamma}, {"Jz", p.Jz}, {"B", p.B}, {"b", p.b}};
}

inline std::string fmt(double x) { return format_real(x); }

inline int cmd_eval(const CliConfig& c, std::ostream& out) {
  const auto t = temperature_of(c);
  const auto s = energy_scales(c.params);
  nlohmann::json rec;
  rec["inputs"] = params_json(c.params);
  if (t)
    rec["inputs"]["T"] = t->T();
  else
    rec["inputs"]["T"] = 0.0;
  rec["inputs"]["zero_temperature"] = !t.has_value();
  rec["eta"] = s.eta;
  rec["xi"] = s.xi;
  if (t) {
    const auto g = gibbs_closed(c.params, *t);
    const auto l = lambdas_closed(c.params, *t);
    rec["partition_function"] = g.partition;
    rec["gibbs"] = state_json(g);
    rec["lambdas"] = l.lambdas;
    rec["concurrence"] = concurrence(l).value;
  } else {
    const auto v = concurrence_T0(c.params);
    const auto g = ground_state_density(c.params);
    rec["branch"] = to_string(v.branch);
    rec["gibbs"] = state_json(g);
    rec["ground_degeneracy"] = static_cast<int>(g.partition);
    rec["lambdas"] = lambdas_from_elements(g).lambdas;
    rec["concurrence"] = v.concurrence_T0;
  }
  out << rec.dump(2) << '\n';
  return exit_ok;
}

inline GridFormat format_of(const CliConfig& c) {
  const auto f = parse_format(c.format);
  if (!f) throw UsageError("--format must be csv or json (got '" + c.format + "')");
  return *f;
}

inline int cmd_sweep(const CliConfig& c, std::ostream& out) {
  if (c.axes.empty() || c.axes.size() > 2) throw UsageError("sweep needs one or two --axis specs");
  if (c.out.empty()) throw UsageError("sweep needs --out PATH");
  const auto format = format_of(c);
  SweepSpec spec;
  for (const auto& a : c.axes) spec.axes.push_back(parse_axis(a));
  spec.fixed = c.params;
  spec.T = c.T;
  spec.zero_temperature = c.zero_temperature;
  if (!c.zero_temperature && !spec.sweeps(Parameter::T) && !(c.T > 0))
    throw UsageError("--T must be > 0 (pass --zero-temperature for T = 0)");

  const auto grid = run_sweep(spec);
  write_grid(grid, format, c.out);

  std::vector<int> shape;
  for (const auto& a : spec.axes) shape.push_back(a.count);
  if (c.json) {
    out << nlohmann::json{{"path", c.out}, {"shape", shape}, {"points", grid.values.size()}}.dump()
        << '\n';
  } else {
    out << "wrote " << c.out << " (";
    for (std::size_t i = 0; i < spec.axes.size(); ++i)
      out << (i ? " x " : "") << to_string(spec.axes[i].parameter) << "=" << shape[i];
    out << ", " << grid.values.size() << " points)\n";
  }
  return exit_ok;
}

inline int cmd_critical(const CliConfig& c, std::ostream& out) {
  nlohmann::json rec;
  if (c.critical_target == "bfield") {
    const auto bc = critical_b(c.params);
    std::optional<bool> larger;
    if (bc) {
      if (c.params.gamma == 0.0)
        throw UsageError("--gamma 0: the larger-revival verdict is undefined for gamma = 0");
      larger = larger_revival_condition(c.params);
    }
    rec["inputs"] = params_json(c.params);
    rec["inputs"].erase("b");
    rec["b_c"] = bc ? nlohmann::json(*bc) : nlohmann::json(nullptr);
    rec["larger_revival"] = larger ? nlohmann::json(*larger) : nlohmann::json(nullptr);
    if (!c.json) {
      out << "b_c = " << (bc ? fmt(*bc) : "none") << '\n';
      if (larger) out << "larger_revival = " << (*larger ? "true" : "false") << '\n';
      return exit_ok;
    }
  } else if (c.critical_target == "temperature") {
    if (!(c.t_max > 0) || !std::isfinite(c.t_max)) throw UsageError("--t-max must be > 0");
    const auto tc = critical_temperature(c.params, c.t_max);
    rec["inputs"] = params_json(c.params);
    rec["t_max"] = c.t_max;
    rec["T_c"] = tc ? nlohmann::json(tc->value) : nlohmann::json(nullptr);
    if (tc) rec["bracket"] = {tc->lower, tc->upper};
    if (!c.json) {
      if (tc)
        out << "T_c = " << fmt(tc->value) << " (bracket [" << fmt(tc->lower) << ", "
            << fmt(tc->upper) << "])\n";
      else
        out << "T_c = none (no entanglement on (0, " << fmt(c.t_max) << "])\n";
      return exit_ok;
    }
  } else {
    throw UsageError("critical needs a target: bfield or temperature");
  }
  out << rec.dump(2) << '\n';
  return exit_ok;
}

inline nlohmann::json figure_summary(const FigurePreset& fig) {
  using nlohmann::json;
  json summary = json::object();
  if (fig.name.rfind("fig1", 0) == 0) {
    json curves = json::array();
    std::vector<double> bcs;
    for (const auto& curve : fig.curves) {
      const auto& spec = curve.spec;
      const auto bc = critical_b(spec.fixed);
      const auto rev = detect_revival(spec.fixed, std::nullopt, spec.axes[0].stop,
                                      static_cast<std::size_t>(spec.axes[0].count));
      if (bc) bcs.push_back(*bc);
      curves.push_back({{"curve", curve.label},
                        {"b_c", bc ? json(*bc) : json(nullptr)},
                        {"plateau", rev.plateau_value},
                        {"has_revival", rev.has_revival},
                        {"revival_peak", rev.revival_peak_value},
                        {"revival_peak_b", rev.revival_peak_location},
                        {"larger_revival", rev.larger_revival}});
    }
    summary["curves"] = curves;
    if (fig.name != "fig1c") {
      bool increasing = bcs.size() == fig.curves.size();
      for (std::size_t i = 1; i < bcs.size(); ++i) increasing = increasing && bcs[i] > bcs[i - 1];
      summary["b_c_increases_with_gamma"] = increasing;
    }
  } else if (fig.name == "fig3") {
    const auto& spec = fig.curves[0].spec;
    json tcs = json::array();
    std::optional<double> prev;
    bool nondecreasing = true;
    for (double b : {4.0, 5.0, 6.0, 7.0, 8.0}) {
      auto p = spec.fixed;
      p.b = b;
      // Searched past the plotted T range so large-b columns are not clipped.
      const auto tc = critical_temperature(p, 10.0);
      const double value = tc ? tc->value : 0.0;
      if (prev && value < *prev) nondecreasing = false;
      prev = value;
      tcs.push_back({{"b", b}, {"T_c", tc ? json(tc->value) : json(nullptr)}});
    }
    summary["T_c"] = tcs;
    summary["T_c_nondecreasing_in_b"] = nondecreasing;
  }
  return summary;
}

inline int cmd_figure(const CliConfig& c, std::ostream& out) {
  FigurePreset fig;
  try {
    fig = figure_preset(c.figure_name);
  } catch (const InvalidSpec& e) {
    throw UsageError(e.what());
  }
  const auto format = format_of(c);
  const std::filesystem::path dir = c.out.empty() ? std::filesystem::path(".") : std::filesystem::path(c.out);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory '" + dir.string() + "': " + ec.message());

  nlohmann::json rec;
  rec["figure"] = fig.name;
  rec["files"] = nlohmann::json::array();
  std::vector<SweepGrid> grids;
  for (const auto& curve : fig.curves) {
    auto grid = run_sweep(curve.spec);
    const auto path = (dir / (curve.label + (format == GridFormat::csv ? ".csv" : ".json"))).string();
    write_grid(grid, format, path);
    rec["files"].push_back(path);
    grids.push_back(std::move(grid));
  }
  rec["summary"] = figure_summary(fig);
  if (fig.name == "fig2" || fig.name == "fig4") {
    const auto& g = grids.front();
    const auto it = std::max_element(g.values.begin(), g.values.end());
    const auto idx = static_cast<int>(it - g.values.begin());
    const int cols = g.spec.axes[1].count;
    rec["summary"]["max_concurrence"] = *it;
    rec["summary"]["max_at"] = {{std::string(to_string(g.spec.axes[0].parameter)),
                                 g.spec.axes[0].value(idx / cols)},
                                {std::string(to_string(g.spec.axes[1].parameter)),
                                 g.spec.axes[1].value(idx % cols)}};
    rec["summary"]["entangled_regions"] = count_regions(g, 1e-3);
  }

  if (c.json) {
    out << rec.dump(2) << '\n';
  } else {
    for (const auto& f : rec["files"]) out << "wrote " << f.get<std::string>() << '\n';
    out << "summary: " << rec["summary"].dump() << '\n';
  }
  return exit_ok;
}

inline int cmd_verify(const CliConfig& c, std::ostream& out) {
  if (c.samples < 1) throw UsageError("--samples must be >= 1");
  if (!(c.tol >= 0)) throw UsageError("--tol must be >= 0");
  VerifyOptions o;
  o.samples = c.samples;
  o.seed = c.seed;
  o.tol = c.tol;
  const auto results = run_verification(o);
  bool ok = true;
  nlohmann::json rec = nlohmann::json::array();
  for (const auto& r : results) {
    ok = ok && r.passed;
    rec.push_back({{"suite", r.name},
                   {"max_deviation", r.max_deviation},
                   {"tolerance", r.tolerance},
                   {"checked", r.checked},
                   {"passed", r.passed},
                   {"failure", r.failure}});
    if (!c.json) {
      char line[160];
      std::snprintf(line, sizeof line, "%-28s max_dev=%-11.3e tol=%-9.2e n=%-5zu %s", r.name.c_str(),
                    r.max_deviation, r.tolerance, r.checked, r.passed ? "PASS" : "FAIL");
      out << line;
      if (!r.passed) out << "  [" << r.failure << "]";
      out << '\n';
    }
  }
  if (c.json)
    out << nlohmann::json{{"suites", rec}, {"passed", ok}}.dump(2) << '\n';
  else
    out << (ok ? "all suites passed\n" : "verification FAILED\n");
  return ok ? exit_ok : exit_verify_failed;
}

// Fills options the user did not give on the command line from a flat JSON
// object keyed by long flag names.
inline void apply_config_file(CLI::App& app, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("--config: cannot read '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.is_object()) throw UsageError("--config: top level must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    CLI::Option* opt = nullptr;
    try {
      opt = app.get_option("--" + key);
    } catch (const CLI::OptionNotFound&) {
      throw UsageError("--config: unknown key '" + key + "'");
    }
    if (opt->count() > 0 || key == "config") continue;
    std::vector<std::string> results;
    if (value.is_array()) {
      for (const auto& v : value) results.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else if (value.is_boolean()) {
      if (!value.get<bool>()) continue;
      results.push_back("true");
    } else {
      results.push_back(value.is_string() ? value.get<std::string>() : value.dump());
    }
    try {
      for (const auto& r : results) opt->add_result(r);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("--config: key '" + key + "': " + e.what());
    }
  }
}

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Thermal entanglement of the two-qubit XYZ chain in an inhomogeneous field", "xyzent"};
  app.require_subcommand(1);
  CliConfig c;

  app.add_option("--J", c.params.J, "exchange coupling J = (Jx + Jy)/2")->capture_default_str();
  app.add_option("--gamma", c.params.gamma, "XY anisotropy")->capture_default_str();
  app.add_option("--Jz", c.params.Jz, "z coupling")->capture_default_str();
  app.add_option("--B", c.params.B, "uniform field")->capture_default_str();
  app.add_option("--b", c.params.b, "field inhomogeneity")->capture_default_str();
  app.add_option("--T", c.T, "temperature (k_B = 1)")->capture_default_str();
  app.add_flag("--zero-temperature", c.zero_temperature, "evaluate the T = 0 ground state");
  app.add_option("--axis", c.axes, "sweep axis NAME:START:STOP:COUNT (repeat for 2-D)")
      ->expected(1, 2)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--out", c.out, "output file (sweep) or directory (figure)");
  app.add_option("--format", c.format, "csv or json")->capture_default_str();
  app.add_flag("--json", c.json, "machine-readable output");
  app.add_option("--config", c.config, "flat JSON file of flag values");
  app.add_option("--samples", c.samples, "draws per verification suite")->capture_default_str();
  app.add_option("--seed", c.seed, "verification seed")->capture_default_str();
  app.add_option("--tol", c.tol, "verification tolerance")->capture_default_str();
  app.add_option("--t-max", c.t_max, "upper temperature for the T_c search")->capture_default_str();

  auto* eval = app.add_subcommand("eval", "Gibbs state, Wootters roots and concurrence at one point");
  auto* sweep = app.add_subcommand("sweep", "concurrence over one or two parameter axes");
  auto* critical = app.add_subcommand("critical", "critical field b_c or critical temperature T_c");
  critical->add_option("target", c.critical_target, "bfield or temperature")
      ->required()
      ->check(CLI::IsMember({"bfield", "temperature"}));
  auto* figure = app.add_subcommand("figure", "write the data behind one figure");
  figure->add_option("name", c.figure_name, "fig1a, fig1b, fig1c, fig2, fig3 or fig4")->required();
  auto* verify = app.add_subcommand("verify", "randomized cross-checks of every evaluation route");
  for (auto* sub : {eval, sweep, critical, figure, verify}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
      out << app.help();
      return exit_ok;
    }
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }

  try {
    if (!c.config.empty()) detail::apply_config_file(app, c.config);
    detail::check_params(c);
    if (eval->parsed()) return detail::cmd_eval(c, out);
    if (sweep->parsed()) return detail::cmd_sweep(c, out);
    if (critical->parsed()) return detail::cmd_critical(c, out);
    if (figure->parsed()) return detail::cmd_figure(c, out);
    return detail::cmd_verify(c, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InvalidParameter& e) {
    err << "error: " << e.what() << '\n';
  } catch (const InvalidSpec& e) {
    err << "error: " << e.what() << '\n';
  } catch (const UndefinedCondition& e) {
    err << "error: " << e.what() << '\n';
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
  }
  return exit_usage;
}

} // namespace xyzent::cli
