#pragma once

// Zero-temperature phase structure and critical points.
//
// At T = 0 the ground state is Sigma- (energy Jz/2 - eta) or psi- (energy
// -Jz/2 - xi); they cross where xi = eta - Jz. The concurrence there is
//
//   C = J gamma / eta            xi < eta - Jz   (sigma phase)
//   C = |J gamma/eta - J/xi| / 2 xi = eta - Jz   (degenerate mixture)
//   C = J / xi                   xi > eta - Jz   (psi phase)
//
// Since eta does not depend on b, the crossing in b sits at
// b_c = sqrt((eta - Jz)^2 - J^2).

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "entanglement.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "thermal.hpp"

namespace xyzent {

enum class Phase { sigma_phase, degenerate, psi_phase };

inline std::string_view to_string(Phase p) {
  switch (p) {
  case Phase::sigma_phase: return "sigma_phase";
  case Phase::degenerate: return "degenerate";
  case Phase::psi_phase: return "psi_phase";
  }
  return "?";
}

struct PhaseVerdict {
  Phase branch = Phase::sigma_phase;
  double concurrence_T0 = 0;
};

inline PhaseVerdict concurrence_T0(const ModelParams& p) {
  const auto s = energy_scales(p);
  const double sigma_value = s.eta > 0 ? std::abs(p.J * p.gamma) / s.eta : 0.0;
  const double psi_value = s.xi > 0 ? std::abs(p.J) / s.xi : 0.0;
  const double gap = s.xi - (s.eta - p.Jz);
  if (std::abs(gap) <= degeneracy_tolerance(s))
    return {Phase::degenerate, std::abs(sigma_value - psi_value) / 2};
  if (gap < 0) return {Phase::sigma_phase, sigma_value};
  return {Phase::psi_phase, psi_value};
}

/// Concurrence at T = 0 (nullopt) or at a finite temperature.
inline double concurrence_at(const ModelParams& p, const std::optional<Temperature>& t) {
  return t ? thermal_concurrence(p, *t) : concurrence_T0(p).concurrence_T0;
}

/// b_c = sqrt((eta - Jz)^2 - J^2); the b field of the input is ignored.
/// Absent when eta - Jz <= |J|: the psi branch then wins for every b.
inline std::optional<double> critical_b(const ModelParams& p_without_b) {
  auto p = p_without_b;
  p.b = 0;
  const auto s = energy_scales(p);
  const double d = s.eta - p.Jz;
  if (!(d > std::abs(p.J))) return std::nullopt;
  return std::sqrt((d - p.J) * (d + p.J));
}

/// Independent route to b_c: bisection in b on which block holds the lowest
/// eigenvalue of the numerically diagonalized Hamiltonian.
inline std::optional<double> bisect_critical_b(const ModelParams& p_without_b, double b_max) {
  const auto psi_is_ground = [&](double b) {
    auto p = p_without_b;
    p.b = b;
    const auto es = eigensystem_numeric(build_hamiltonian(p));
    return es[EigenLabel::psi_minus].energy < es[EigenLabel::sigma_minus].energy;
  };
  if (psi_is_ground(0.0) || !psi_is_ground(b_max)) return std::nullopt;
  double lo = 0.0, hi = b_max;
  while (hi - lo > 1e-13 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (psi_is_ground(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

/// Larger-revival condition: Jz > eta - eta/gamma, i.e. the revived value
/// J/(eta - Jz) just past b_c beats the plateau J gamma/eta.
inline bool larger_revival_condition(const ModelParams& p_without_b) {
  if (p_without_b.gamma == 0.0)
    throw UndefinedCondition("larger-revival condition is undefined for gamma = 0");
  if (!critical_b(p_without_b))
    throw UndefinedCondition("larger-revival condition needs a zero-temperature transition in b");
  auto p = p_without_b;
  p.b = 0;
  const double eta = energy_scales(p).eta;
  return p.Jz > eta - eta / p.gamma;
}

struct CriticalTemperature {
  double value = 0;
  double lower = 0; ///< last temperature known to be entangled
  double upper = 0; ///< first temperature known to be separable
};

/// Largest T in (0, t_max] with C(T) > 0. Coarse scan (50 linear points up
/// to 0.1, then 200 logarithmic points to t_max) followed by bisection to a
/// relative width of 1e-8.
inline std::optional<CriticalTemperature> critical_temperature(const ModelParams& p, double t_max) {
  if (!std::isfinite(t_max) || !(t_max > 0))
    throw InvalidParameter("critical_temperature: t_max must be finite and > 0");
  validate(p);

  std::vector<double> grid;
  if (t_max <= 0.1) {
    for (int i = 1; i <= 200; ++i) grid.push_back(t_max * i / 200.0);
  } else {
    for (int i = 1; i <= 50; ++i) grid.push_back(0.1 * i / 50.0);
    const double ratio = std::log(t_max / 0.1);
    for (int i = 1; i <= 200; ++i) grid.push_back(0.1 * std::exp(ratio * i / 200.0));
    grid.back() = t_max;
  }

  const auto entangled = [&](double T) {
    return thermal_concurrence(p, Temperature::from_T(T)) > 0.0;
  };

  std::optional<std::size_t> last;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (entangled(grid[i])) last = i;
  if (!last) return std::nullopt;
  if (*last + 1 == grid.size()) return CriticalTemperature{t_max, t_max, t_max};

  double lo = grid[*last], hi = grid[*last + 1];
  while (hi - lo > 1e-8 * hi) {
    const double mid = 0.5 * (lo + hi);
    (entangled(mid) ? lo : hi) = mid;
  }
  return CriticalTemperature{0.5 * (lo + hi), lo, hi};
}

struct RevivalReport {
  bool has_revival = false;
  double plateau_value = 0;     ///< C at b = 0
  double drop_location = 0;     ///< b at the bottom of the drop
  double drop_value = 0;        ///< C at drop_location
  double revival_peak_value = 0;
  double revival_peak_location = 0;
  bool larger_revival = false;
  /// T = 0 only: the zero-temperature transition lies at or beyond b_max.
  bool transition_beyond_range = false;
  /// T = 0 with a revival: plateau and peak agree with J gamma/eta and
  /// J/(eta - Jz) to 1e-6.
  std::optional<bool> closed_form_consistent;
};

/// Scans C(b) on [0, b_max]. The drop is the first point after which C
/// rises; the revival peak is the largest value beyond it. A revival needs
/// a rise of more than 1e-6, and it is "larger" when the peak also beats
/// the b = 0 plateau by 1e-6.
///
/// At T = 0 the drop is a single point at b_c, so b_c and b_c +- 1e-7 are
/// added to the uniform grid.
inline RevivalReport detect_revival(const ModelParams& p_without_b,
                                    const std::optional<Temperature>& t, double b_max,
                                    std::size_t n) {
  if (!std::isfinite(b_max) || !(b_max > 0))
    throw InvalidParameter("detect_revival: b_max must be finite and > 0");
  if (n < 100) throw InvalidParameter("detect_revival: need at least 100 grid points");

  std::vector<double> bs;
  bs.reserve(n + 3);
  for (std::size_t i = 0; i < n; ++i) bs.push_back(b_max * i / static_cast<double>(n - 1));

  RevivalReport report;
  const auto bc = critical_b(p_without_b);
  if (!t && bc) {
    if (*bc >= b_max) {
      report.transition_beyond_range = true;
    } else {
      const double delta = 1e-7 * std::max(1.0, *bc);
      for (double b : {*bc - delta, *bc, *bc + delta})
        if (b > 0 && b < b_max) bs.push_back(b);
      std::sort(bs.begin(), bs.end());
      bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    }
  }

  std::vector<double> cs(bs.size());
  for (std::size_t i = 0; i < bs.size(); ++i) {
    auto p = p_without_b;
    p.b = bs[i];
    cs[i] = concurrence_at(p, t);
  }

  report.plateau_value = cs.front();
  std::size_t m = 0;
  while (m + 1 < cs.size() && !(cs[m + 1] > cs[m] + 1e-12)) ++m;
  if (m + 1 < cs.size()) {
    std::size_t peak = m + 1;
    for (std::size_t j = m + 1; j < cs.size(); ++j)
      if (cs[j] > cs[peak]) peak = j;
    report.drop_location = bs[m];
    report.drop_value = cs[m];
    report.revival_peak_location = bs[peak];
    report.revival_peak_value = cs[peak];
    report.has_revival = cs[peak] - cs[m] > 1e-6;
    report.larger_revival = report.has_revival && cs[peak] > report.plateau_value + 1e-6;
  }

  if (!t && report.has_revival && bc) {
    auto p = p_without_b;
    p.b = 0;
    const auto s = energy_scales(p);
    const double plateau = s.eta > 0 ? std::abs(p.J * p.gamma) / s.eta : 0.0;
    const double peak = std::abs(p.J) / (s.eta - p.Jz);
    report.closed_form_consistent = std::abs(report.plateau_value - plateau) <= 1e-6 &&
                                    std::abs(report.revival_peak_value - peak) <= 1e-6;
  }
  return report;
}

} // namespace xyzent
