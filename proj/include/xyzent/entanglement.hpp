#pragma once

// Wootters concurrence C = max(0, l1 - l2 - l3 - l4) of the X-form Gibbs
// states, where l_i are the square roots of the eigenvalues of
// R = rho (sy x sy) rho^* (sy x sy), sorted descending. For an X state R
// splits into two 2x2 blocks and the roots are
//   |sqrt(mu+ mu-) +- v|  and  |sqrt(w1 w2) +- z|,
// so R itself is never formed.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>

#include "errors.hpp"
#include "model.hpp"
#include "thermal.hpp"

namespace xyzent {

/// Wootters roots, sorted descending, all >= 0.
struct LambdaSpectrum {
  std::array<double, 4> lambdas{};

  static LambdaSpectrum sorted(std::array<double, 4> l) {
    std::sort(l.begin(), l.end(), std::greater<>());
    return LambdaSpectrum{l};
  }
  double sum() const { return lambdas[0] + lambdas[1] + lambdas[2] + lambdas[3]; }
};

/// Concurrence value in [0, 1].
struct Concurrence {
  double value = 0;
};

namespace detail {

// Clamps rounding-level negative radicands; anything below -1e-14 means the
// state is not positive semidefinite.
inline double checked_sqrt(double x, const char* what) {
  if (x < -1e-14) throw InvalidState(std::string("negative block product ") + what);
  return std::sqrt(std::max(0.0, x));
}

} // namespace detail

inline LambdaSpectrum lambdas_from_elements(const GibbsXState& s) {
  const double corner = detail::checked_sqrt(s.mu_plus * s.mu_minus, "mu+ mu-");
  const double center = detail::checked_sqrt(s.omega1 * s.omega2, "w1 w2");
  return LambdaSpectrum::sorted({std::abs(corner + s.v), std::abs(corner - s.v),
                                 std::abs(center + s.z), std::abs(center - s.z)});
}

/// Wootters roots kept per block: corner = {l1, l2} from the |00>,|11>
/// block, center = {l3, l4} from the |01>,|10> block (unsorted).
struct BlockRoots {
  std::array<double, 2> corner{};
  std::array<double, 2> center{};
};

/// Roots straight from the model:
///   l1,2 = e^{-Jz beta/2} |sqrt(1 + (J gamma/eta)^2 sinh^2(eta beta)) -+ (J gamma/eta) sinh(eta beta)| / Z
///   l3,4 = e^{+Jz beta/2} |sqrt(1 + (J/xi)^2 sinh^2(xi beta))        -+ (J/xi) sinh(xi beta)| / Z
inline BlockRoots block_roots_closed(const ModelParams& p, Temperature t) {
  const auto s = energy_scales(p);
  const auto k = detail::scaled_blocks(p, s, t.beta());
  const double corner_coh = p.J * p.gamma * k.sinhc_sigma;
  const double center_coh = p.J * k.sinhc_psi;
  const double zs = k.partition;
  // |sqrt(l^2 + c^2) -+ c| without cancellation: the smaller root is l^2 / (sqrt(l^2 + c^2) + |c|).
  const auto roots = [zs](double low, double coh) -> std::array<double, 2> {
    const double big = std::hypot(low, coh) + std::abs(coh);
    const double small = big > 0.0 ? low * (low / big) : 0.0;
    return coh >= 0.0 ? std::array<double, 2>{small / zs, big / zs}
                      : std::array<double, 2>{big / zs, small / zs};
  };
  return {roots(k.low_sigma, corner_coh), roots(k.low_psi, center_coh)};
}

inline LambdaSpectrum lambdas_closed(const ModelParams& p, Temperature t) {
  const auto r = block_roots_closed(p, t);
  return LambdaSpectrum::sorted({r.corner[0], r.corner[1], r.center[0], r.center[1]});
}

inline Concurrence concurrence(const LambdaSpectrum& l) {
  const auto& x = l.lambdas;
  return {std::max(0.0, x[0] - x[1] - x[2] - x[3])};
}

/// C = 2 max(0, |z| - sqrt(mu+ mu-), |v| - sqrt(w1 w2)).
inline Concurrence concurrence_xstate_max(const GibbsXState& s) {
  const double corner = detail::checked_sqrt(s.mu_plus * s.mu_minus, "mu+ mu-");
  const double center = detail::checked_sqrt(s.omega1 * s.omega2, "w1 w2");
  return {2.0 * std::max({0.0, std::abs(s.z) - corner, std::abs(s.v) - center})};
}

/// Thermal concurrence at finite temperature via the closed-form roots.
inline double thermal_concurrence(const ModelParams& p, Temperature t) {
  return concurrence(lambdas_closed(p, t)).value;
}

} // namespace xyzent
