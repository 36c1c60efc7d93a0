#pragma once

// Concurrence grids over one or two model parameters, the figure presets,
// and CSV / JSON serialization.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "criticality.hpp"
#include "entanglement.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "thermal.hpp"

namespace xyzent {

enum class Parameter { J, gamma, Jz, B, b, T };

inline constexpr std::array<Parameter, 6> all_parameters{Parameter::J,  Parameter::gamma,
                                                         Parameter::Jz, Parameter::B,
                                                         Parameter::b,  Parameter::T};

inline std::string_view to_string(Parameter p) {
  switch (p) {
  case Parameter::J: return "J";
  case Parameter::gamma: return "gamma";
  case Parameter::Jz: return "Jz";
  case Parameter::B: return "B";
  case Parameter::b: return "b";
  case Parameter::T: return "T";
  }
  return "?";
}

inline std::optional<Parameter> parse_parameter(std::string_view name) {
  for (auto p : all_parameters)
    if (to_string(p) == name) return p;
  return std::nullopt;
}

/// Linearly spaced axis; value(count - 1) == stop exactly.
struct AxisSpec {
  Parameter parameter = Parameter::b;
  double start = 0;
  double stop = 1;
  int count = 2;

  double value(int i) const {
    if (i == count - 1) return stop;
    return start + (stop - start) * i / static_cast<double>(count - 1);
  }
};

struct SweepSpec {
  std::vector<AxisSpec> axes;
  ModelParams fixed;
  double T = 1.0;
  bool zero_temperature = false; ///< evaluate with the T = 0 formulas

  bool sweeps(Parameter p) const {
    return std::any_of(axes.begin(), axes.end(), [p](const AxisSpec& a) { return a.parameter == p; });
  }
};

/// Filled grid, row-major with the first axis outermost.
struct SweepGrid {
  SweepSpec spec;
  std::vector<double> values;

  double at(int i, int j = 0) const {
    const int inner = spec.axes.size() > 1 ? spec.axes[1].count : 1;
    return values[static_cast<std::size_t>(i) * inner + j];
  }
};

inline void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw InvalidSpec("sweep needs one or two axes");
  if (spec.axes.size() == 2 && spec.axes[0].parameter == spec.axes[1].parameter)
    throw InvalidSpec("sweep axes must name different parameters");
  for (const auto& a : spec.axes) {
    const std::string name(to_string(a.parameter));
    if (!std::isfinite(a.start) || !std::isfinite(a.stop) || !(a.start < a.stop))
      throw InvalidSpec("axis '" + name + "': need finite start < stop");
    if (a.count < 2) throw InvalidSpec("axis '" + name + "': count must be >= 2");
    if (a.parameter == Parameter::T &&
        (spec.zero_temperature ? a.start < 0 : !(a.start > 0)))
      throw InvalidSpec("axis 'T': start must be > 0 (>= 0 for zero-temperature sweeps)");
  }
  validate(spec.fixed);
  if (!spec.zero_temperature && !spec.sweeps(Parameter::T) &&
      (!std::isfinite(spec.T) || !(spec.T > 0)))
    throw InvalidSpec("temperature must be > 0 unless the sweep is zero-temperature");
}

namespace detail {

inline void assign(ModelParams& p, double& T, Parameter which, double value) {
  switch (which) {
  case Parameter::J: p.J = value; break;
  case Parameter::gamma: p.gamma = value; break;
  case Parameter::Jz: p.Jz = value; break;
  case Parameter::B: p.B = value; break;
  case Parameter::b: p.b = value; break;
  case Parameter::T: T = value; break;
  }
}

inline double evaluate_point(const SweepSpec& spec, std::size_t index) {
  ModelParams p = spec.fixed;
  double T = spec.T;
  const std::size_t inner = spec.axes.size() > 1 ? spec.axes[1].count : 1;
  assign(p, T, spec.axes[0].parameter, spec.axes[0].value(static_cast<int>(index / inner)));
  if (spec.axes.size() > 1)
    assign(p, T, spec.axes[1].parameter, spec.axes[1].value(static_cast<int>(index % inner)));

  const bool at_zero = spec.zero_temperature && (!spec.sweeps(Parameter::T) || T == 0.0);
  if (at_zero) return concurrence_T0(p).concurrence_T0;
  return thermal_concurrence(p, Temperature::from_T(T));
}

} // namespace detail

inline std::size_t grid_size(const SweepSpec& spec) {
  std::size_t n = 1;
  for (const auto& a : spec.axes) n *= static_cast<std::size_t>(a.count);
  return n;
}

/// Evaluates every grid point. Large grids are split across threads; each
/// point is written to its own slot so the result does not depend on
/// scheduling.
inline SweepGrid run_sweep(const SweepSpec& spec) {
  validate(spec);
  SweepGrid grid{spec, std::vector<double>(grid_size(spec))};
  const std::size_t n = grid.values.size();
  const std::size_t workers =
      n < 4096 ? 1 : std::clamp<std::size_t>(std::thread::hardware_concurrency(), 1, 16);

  const auto work = [&](std::size_t first, std::size_t last) {
    for (std::size_t i = first; i < last; ++i) grid.values[i] = detail::evaluate_point(spec, i);
  };
  if (workers == 1) {
    work(0, n);
  } else {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back(work, std::min(n, w * chunk), std::min(n, (w + 1) * chunk));
  }
  return grid;
}

// Figure presets -----------------------------------------------------------

struct FigureCurve {
  std::string label; ///< file stem, e.g. "fig1a_gamma0.2"
  SweepSpec spec;
};

struct FigurePreset {
  std::string name;
  std::vector<FigureCurve> curves;
};

inline constexpr std::array<std::string_view, 6> figure_names{"fig1a", "fig1b", "fig1c",
                                                              "fig2",  "fig3",  "fig4"};

inline std::string figure_names_joined() {
  std::string out;
  for (auto n : figure_names) {
    if (!out.empty()) out += ", ";
    out += n;
  }
  return out;
}

inline FigurePreset figure_preset(std::string_view name) {
  FigurePreset fig{std::string(name), {}};
  const auto zero_t_curve = [](double gamma, double Jz, double B) {
    SweepSpec s;
    s.axes = {{Parameter::b, 0.0, 4.0, 401}};
    s.fixed = {1.0, gamma, Jz, B, 0.0};
    s.zero_temperature = true;
    return s;
  };

  if (name == "fig1a" || name == "fig1b") {
    const double B = name == "fig1a" ? 0.0 : 0.8;
    for (const auto& [gamma, tag] : {std::pair{0.2, "0.2"}, {0.6, "0.6"}, {0.9, "0.9"}})
      fig.curves.push_back({fig.name + "_gamma" + tag, zero_t_curve(gamma, -1.0, B)});
  } else if (name == "fig1c") {
    for (const auto& [Jz, tag] : {std::pair{-0.2, "-0.2"}, {-0.6, "-0.6"}})
      fig.curves.push_back({fig.name + "_Jz" + tag, zero_t_curve(0.6, Jz, 0.8)});
  } else if (name == "fig2") {
    SweepSpec s;
    s.axes = {{Parameter::b, 0.0, 8.0, 161}, {Parameter::Jz, -2.0, 2.0, 161}};
    s.fixed = {1.0, 0.3, 0.0, 4.0, 0.0};
    s.T = 0.2;
    fig.curves.push_back({"fig2", s});
  } else if (name == "fig3") {
    SweepSpec s;
    s.axes = {{Parameter::b, 0.0, 8.0, 161}, {Parameter::T, 0.02, 3.0, 150}};
    s.fixed = {1.0, 0.2, 1.0, 4.0, 0.0};
    fig.curves.push_back({"fig3", s});
  } else if (name == "fig4") {
    SweepSpec s;
    s.axes = {{Parameter::b, 0.0, 3.0, 151}, {Parameter::gamma, 0.0, 1.0, 101}};
    s.fixed = {1.0, 0.0, -0.6, 0.8, 0.0};
    s.T = 0.4;
    fig.curves.push_back({"fig4", s});
  } else {
    throw InvalidSpec("unknown figure '" + std::string(name) +
                      "'; valid names: " + figure_names_joined());
  }
  return fig;
}

/// Number of 4-connected regions of a 2-D grid where C > threshold.
inline int count_regions(const SweepGrid& grid, double threshold) {
  if (grid.spec.axes.size() != 2) throw InvalidSpec("count_regions needs a 2-D grid");
  const int rows = grid.spec.axes[0].count;
  const int cols = grid.spec.axes[1].count;
  std::vector<char> seen(grid.values.size(), 0);
  int regions = 0;
  std::vector<std::pair<int, int>> stack;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      const auto idx = static_cast<std::size_t>(i) * cols + j;
      if (seen[idx] || !(grid.values[idx] > threshold)) continue;
      ++regions;
      seen[idx] = 1;
      stack.emplace_back(i, j);
      while (!stack.empty()) {
        const auto [r, c] = stack.back();
        stack.pop_back();
        constexpr int dr[] = {1, -1, 0, 0};
        constexpr int dc[] = {0, 0, 1, -1};
        for (int k = 0; k < 4; ++k) {
          const int nr = r + dr[k], nc = c + dc[k];
          if (nr < 0 || nc < 0 || nr >= rows || nc >= cols) continue;
          const auto nidx = static_cast<std::size_t>(nr) * cols + nc;
          if (seen[nidx] || !(grid.values[nidx] > threshold)) continue;
          seen[nidx] = 1;
          stack.emplace_back(nr, nc);
        }
      }
    }
  return regions;
}

// Serialization ------------------------------------------------------------

enum class GridFormat { csv, json };

inline std::optional<GridFormat> parse_format(std::string_view s) {
  if (s == "csv") return GridFormat::csv;
  if (s == "json") return GridFormat::json;
  return std::nullopt;
}

inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

inline void write_csv(const SweepGrid& grid, std::ostream& os) {
  const auto& axes = grid.spec.axes;
  for (const auto& a : axes) os << to_string(a.parameter) << ',';
  os << "concurrence\n";
  const int rows = axes[0].count;
  const int cols = axes.size() > 1 ? axes[1].count : 1;
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      os << format_real(axes[0].value(i)) << ',';
      if (axes.size() > 1) os << format_real(axes[1].value(j)) << ',';
      os << format_real(grid.at(i, j)) << '\n';
    }
}

inline nlohmann::json to_json(const SweepGrid& grid) {
  using nlohmann::json;
  const auto& spec = grid.spec;
  json axes = json::array();
  for (const auto& a : spec.axes)
    axes.push_back({{"parameter", to_string(a.parameter)},
                    {"start", a.start},
                    {"stop", a.stop},
                    {"count", a.count},
                    {"spacing", "linear"}});

  json fixed = json::object();
  const auto put = [&](Parameter p, double v) {
    if (!spec.sweeps(p)) fixed[std::string(to_string(p))] = v;
  };
  put(Parameter::J, spec.fixed.J);
  put(Parameter::gamma, spec.fixed.gamma);
  put(Parameter::Jz, spec.fixed.Jz);
  put(Parameter::B, spec.fixed.B);
  put(Parameter::b, spec.fixed.b);
  if (!spec.sweeps(Parameter::T)) {
    if (spec.zero_temperature)
      fixed["T"] = 0.0;
    else
      fixed["T"] = spec.T;
  }
  fixed["zero_temperature"] = spec.zero_temperature;

  json values = json::array();
  if (spec.axes.size() == 1) {
    values = grid.values;
  } else {
    for (int i = 0; i < spec.axes[0].count; ++i) {
      json row = json::array();
      for (int j = 0; j < spec.axes[1].count; ++j) row.push_back(grid.at(i, j));
      values.push_back(std::move(row));
    }
  }
  return {{"schema_version", 1}, {"axes", axes}, {"fixed", fixed}, {"values", values}};
}

inline void write_grid(const SweepGrid& grid, GridFormat format, std::ostream& os) {
  if (format == GridFormat::csv)
    write_csv(grid, os);
  else
    os << to_json(grid).dump(2) << '\n';
}

inline void write_grid(const SweepGrid& grid, GridFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_grid(grid, format, out);
  out.flush();
  if (!out) throw IoError("failed writing '" + path + "'");
}

} // namespace xyzent
