#pragma once

// Randomized self-consistency suites. Every suite pits two independently
// derived routes against each other over seeded parameter draws and
// reports the worst deviation it saw.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "criticality.hpp"
#include "entanglement.hpp"
#include "model.hpp"
#include "thermal.hpp"

namespace xyzent {

struct VerifyOptions {
  std::size_t samples = 1000;
  std::uint64_t seed = 42;
  double tol = 1e-10; ///< applies to the exact-equivalence suites
};

struct SuiteResult {
  std::string name;
  double max_deviation = 0;
  double tolerance = 0;
  std::size_t checked = 0;
  bool passed = true;
  std::string failure; ///< parameters of the first failing draw
};

struct Draw {
  ModelParams p;
  double T = 1;
};

inline std::string describe(const Draw& d) {
  std::ostringstream os;
  os.precision(17);
  os << "J=" << d.p.J << " gamma=" << d.p.gamma << " Jz=" << d.p.Jz << " B=" << d.p.B
     << " b=" << d.p.b << " T=" << d.T;
  return os.str();
}

/// Seeded draws: couplings and fields in [-5, 5], T in [0.05, 10].
class DrawSource {
public:
  explicit DrawSource(std::uint64_t seed) : rng_(seed) {}

  Draw next() {
    std::uniform_real_distribution<double> par(-5.0, 5.0);
    std::uniform_real_distribution<double> temp(0.05, 10.0);
    Draw d;
    d.p.J = par(rng_);
    d.p.gamma = par(rng_);
    d.p.Jz = par(rng_);
    d.p.B = par(rng_);
    d.p.b = par(rng_);
    d.T = temp(rng_);
    return d;
  }

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
  std::mt19937_64 rng_;
};

namespace detail {

class SuiteRecorder {
public:
  SuiteRecorder(std::string name, double tol) { result_.name = std::move(name), result_.tolerance = tol; }

  void record(double deviation, const Draw& d) {
    ++result_.checked;
    if (!(deviation <= result_.max_deviation)) result_.max_deviation = deviation;
    if (!(deviation <= result_.tolerance) && result_.passed) {
      result_.passed = false;
      std::ostringstream os;
      os.precision(3);
      os << "deviation " << deviation << " at " << describe(d);
      result_.failure = os.str();
    }
  }

  SuiteResult finish() && { return std::move(result_); }

private:
  SuiteResult result_;
};

inline double element_diff(const GibbsXState& a, const GibbsXState& b) {
  return std::max({std::abs(a.mu_plus - b.mu_plus), std::abs(a.mu_minus - b.mu_minus),
                   std::abs(a.omega1 - b.omega1), std::abs(a.omega2 - b.omega2),
                   std::abs(a.z - b.z), std::abs(a.v - b.v)});
}

inline double spectrum_diff(const LambdaSpectrum& a, const LambdaSpectrum& b) {
  double d = 0;
  for (std::size_t i = 0; i < 4; ++i) d = std::max(d, std::abs(a.lambdas[i] - b.lambdas[i]));
  return d;
}

/// Largest violation of trace = 1, block positivity and 0 <= C <= 1.
inline double validity_violation(const GibbsXState& s);

inline double validity_violation(const Mat4& m) {
  GibbsXState s;
  s.mu_plus = m[0][0];
  s.omega1 = m[1][1];
  s.omega2 = m[2][2];
  s.mu_minus = m[3][3];
  s.z = m[1][2];
  s.v = m[0][3];
  return validity_violation(s);
}

inline double validity_violation(const GibbsXState& s) {
  const double trace_err = std::abs(s.trace() - 1.0);
  const double psd_err = std::max({0.0, s.v * s.v - s.mu_plus * s.mu_minus,
                                   s.z * s.z - s.omega1 * s.omega2});
  double c = 0;
  try {
    c = concurrence_xstate_max(s).value;
  } catch (const InvalidState&) {
    return 1.0;
  }
  const double range_err = std::max({0.0, -c, c - 1.0});
  // PSD is allowed 1e-14 of slack; rescale it onto the 1e-12 trace budget.
  return std::max({trace_err, psd_err * 100.0, range_err});
}

} // namespace detail

inline SuiteResult verify_gibbs_oracle(const VerifyOptions& o) {
  detail::SuiteRecorder rec("gibbs_closed_vs_oracle", o.tol);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    try {
      rec.record(detail::element_diff(gibbs_closed(d.p, t), gibbs_oracle(d.p, t)), d);
    } catch (const Error&) {
      rec.record(INFINITY, d);
    }
  }
  return std::move(rec).finish();
}

inline SuiteResult verify_oracle_routes(const VerifyOptions& o) {
  detail::SuiteRecorder rec("oracle_spectral_vs_series", o.tol);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto r = gibbs_oracle_routes(d.p, Temperature::from_T(d.T));
    rec.record(max_abs_diff(r.spectral, r.series), d);
  }
  return std::move(rec).finish();
}

/// Roots of the closed-form model vs roots from the elements, and the three
/// concurrence routes pairwise.
inline SuiteResult verify_concurrence_routes(const VerifyOptions& o) {
  detail::SuiteRecorder rec("concurrence_routes", o.tol);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    const auto state = gibbs_closed(d.p, t);
    const auto from_model = lambdas_closed(d.p, t);
    const auto from_elements = lambdas_from_elements(state);
    const double c1 = concurrence(from_model).value;
    const double c2 = concurrence(from_elements).value;
    const double c3 = concurrence_xstate_max(state).value;
    rec.record(std::max({detail::spectrum_diff(from_model, from_elements), std::abs(c1 - c2),
                         std::abs(c1 - c3), std::abs(c2 - c3)}),
               d);
  }
  return std::move(rec).finish();
}

/// Piecewise T = 0 concurrence against the thermal concurrence at T = 1e-3,
/// away from the psi-/Sigma- crossing (|xi - (eta - Jz)| >= 0.05).
inline SuiteResult verify_zero_temperature_limit(const VerifyOptions& o) {
  detail::SuiteRecorder rec("zero_temperature_limit", 1e-3);
  DrawSource src(o.seed);
  const auto t = Temperature::from_T(1e-3);
  for (std::size_t i = 0; i < o.samples; ++i) {
    auto d = src.next();
    d.T = 1e-3;
    const auto s = energy_scales(d.p);
    if (std::abs(s.xi - (s.eta - d.p.Jz)) < 0.05) continue;
    rec.record(std::abs(concurrence_T0(d.p).concurrence_T0 - thermal_concurrence(d.p, t)), d);
  }
  return std::move(rec).finish();
}

/// b_c formula against bisection on the numerically found ground block.
inline SuiteResult verify_critical_field(const VerifyOptions& o) {
  detail::SuiteRecorder rec("critical_field_bisection", 1e-6);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto formula = critical_b(d.p);
    const double b_max = formula ? 2.0 * *formula + 1.0 : 20.0;
    const auto bisected = bisect_critical_b(d.p, b_max);
    if (formula.has_value() != bisected.has_value()) {
      rec.record(1.0, d);
      continue;
    }
    if (formula) rec.record(std::abs(*formula - *bisected), d);
  }
  return std::move(rec).finish();
}

/// Draws inside the larger-revival predicate's domain: J in (0, 5],
/// gamma in [0.05, 1], a transition present and Jz at least 0.05 away
/// from eta - eta/gamma.
inline std::vector<Draw> revival_draws(std::uint64_t seed, std::size_t count) {
  DrawSource src(seed);
  std::vector<Draw> out;
  for (std::size_t attempts = 0; out.size() < count && attempts < 1000 * count + 1000; ++attempts) {
    Draw d;
    d.p.J = src.uniform(0.05, 5.0);
    d.p.gamma = src.uniform(0.05, 1.0);
    d.p.Jz = src.uniform(-5.0, 5.0);
    d.p.B = src.uniform(-5.0, 5.0);
    d.p.b = 0;
    d.T = 0;
    if (!critical_b(d.p)) continue;
    const double eta = energy_scales(d.p).eta;
    if (std::abs(d.p.Jz - (eta - eta / d.p.gamma)) < 0.05) continue;
    out.push_back(d);
  }
  return out;
}

/// Larger-revival predicate against the revival detected on a T = 0 scan.
/// Deviation counts mismatches, so the tolerance is zero.
inline SuiteResult verify_larger_revival(const VerifyOptions& o) {
  detail::SuiteRecorder rec("larger_revival_predicate", 0.0);
  for (const auto& d : revival_draws(o.seed, o.samples)) {
    const double b_max = 2.0 * *critical_b(d.p) + 1.0;
    const auto report = detect_revival(d.p, std::nullopt, b_max, 400);
    // When the T=0 curve never climbs back (plateau above three times the
    // post-transition value) there is no revival to reconcile.
    const bool ok = report.larger_revival == larger_revival_condition(d.p) &&
                    report.closed_form_consistent.value_or(!report.has_revival);
    rec.record(ok ? 0.0 : 1.0, d);
  }
  return std::move(rec).finish();
}

/// C is unchanged under gamma -> -gamma and under J -> -J.
inline SuiteResult verify_symmetries(const VerifyOptions& o) {
  detail::SuiteRecorder rec("sign_symmetries", o.tol);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    const double c = thermal_concurrence(d.p, t);
    auto flip_gamma = d.p;
    flip_gamma.gamma = -flip_gamma.gamma;
    auto flip_J = d.p;
    flip_J.J = -flip_J.J;
    rec.record(std::max(std::abs(thermal_concurrence(flip_gamma, t) - c),
                        std::abs(thermal_concurrence(flip_J, t) - c)),
               d);
  }
  return std::move(rec).finish();
}

/// The |00>,|11> block roots scaled by the partition function, Z*l1 and
/// Z*l2, do not depend on b (b only reaches them through Z). Compared
/// relative to their magnitude.
inline SuiteResult verify_b_independence(const VerifyOptions& o) {
  detail::SuiteRecorder rec("corner_roots_b_independent", o.tol);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    auto moved = d.p;
    moved.b = src.uniform(-5.0, 5.0);
    const auto r0 = block_roots_closed(d.p, t);
    const auto r1 = block_roots_closed(moved, t);
    const double z0 = partition_function(d.p, t);
    const double z1 = partition_function(moved, t);
    double dev = 0.0;
    for (int k = 0; k < 2; ++k) {
      const double a = r0.corner[k] * z0;
      const double b = r1.corner[k] * z1;
      dev = std::max(dev, std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-300}));
    }
    rec.record(dev, d);
  }
  return std::move(rec).finish();
}

/// Every closed-form, oracle and ground state is a valid density matrix
/// with 0 <= C <= 1.
inline SuiteResult verify_state_validity(const VerifyOptions& o) {
  detail::SuiteRecorder rec("state_validity", 1e-12);
  DrawSource src(o.seed);
  for (std::size_t i = 0; i < o.samples; ++i) {
    const auto d = src.next();
    const auto t = Temperature::from_T(d.T);
    rec.record(std::max({detail::validity_violation(gibbs_closed(d.p, t)),
                         detail::validity_violation(gibbs_oracle_routes(d.p, t).spectral),
                         detail::validity_violation(ground_state_density(d.p)),
                         detail::validity_violation(gibbs_closed(d.p, Temperature::from_T(1e-3)))}),
               d);
  }
  return std::move(rec).finish();
}

inline std::vector<SuiteResult> run_verification(const VerifyOptions& o) {
  return {verify_gibbs_oracle(o),       verify_oracle_routes(o),
          verify_concurrence_routes(o), verify_zero_temperature_limit(o),
          verify_critical_field(o),     verify_larger_revival(o),
          verify_symmetries(o),         verify_b_independence(o),
          verify_state_validity(o)};
}

} // namespace xyzent
