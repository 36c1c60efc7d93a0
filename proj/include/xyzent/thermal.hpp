#pragma once

// Gibbs state rho = exp(-H/T) / Z of the two-qubit chain.
//
// rho keeps the X pattern of H:
//
//   [ mu+   0    0    v  ]
//   [  0   w1    z    0  ]
//   [  0    z   w2    0  ]
//   [  v    0    0   mu- ]
//
// with, for beta = 1/T,
//   mu+-  = e^{-Jz beta/2} [cosh(eta beta) -+ (B/eta) sinh(eta beta)] / Z
//   w1,2  = e^{+Jz beta/2} [cosh(xi beta)  -+ (b/xi)  sinh(xi beta)]  / Z
//   z     = -(J/xi) e^{+Jz beta/2} sinh(xi beta) / Z
//   v     = -(J gamma/eta) e^{-Jz beta/2} sinh(eta beta) / Z
//   Z     = 2 [e^{-Jz beta/2} cosh(eta beta) + e^{Jz beta/2} cosh(xi beta)]
//
// Every Boltzmann factor is evaluated relative to the ground energy so the
// exponents are <= 0 for any beta.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"
#include "matrix4.hpp"
#include "model.hpp"

namespace xyzent {

/// Strictly positive, finite temperature (k_B = 1).
class Temperature {
public:
  static Temperature from_T(double T) {
    if (!std::isfinite(T) || !(T > 0))
      throw InvalidParameter("temperature must be finite and > 0 (got " + std::to_string(T) + ")");
    return Temperature(T);
  }

  double T() const { return T_; }
  double beta() const { return 1.0 / T_; }

private:
  explicit Temperature(double T) : T_(T) {}
  double T_;
};

struct GibbsXState {
  double mu_plus = 0, mu_minus = 0; ///< populations of |00>, |11>
  double omega1 = 0, omega2 = 0;    ///< populations of |01>, |10>
  double z = 0;                     ///< <01|rho|10>
  double v = 0;                     ///< <00|rho|11>
  /// Z = tr exp(-beta H). For ground states this holds the degeneracy.
  double partition = 1;

  double trace() const { return mu_plus + mu_minus + omega1 + omega2; }

  Mat4 to_matrix() const {
    Mat4 m{};
    m[0][0] = mu_plus;
    m[1][1] = omega1;
    m[2][2] = omega2;
    m[3][3] = mu_minus;
    m[0][3] = m[3][0] = v;
    m[1][2] = m[2][1] = z;
    return m;
  }
};

/// Relative tolerance used to decide that psi- and Sigma- are degenerate.
inline double degeneracy_tolerance(const EnergyScales& s) {
  return 1e-9 * std::max({1.0, s.xi, s.eta});
}

namespace detail {

// (1 - e^{-2 x beta}) / (2 x), i.e. e^{-x beta} sinh(x beta) / x, finite at x = 0.
inline double scaled_sinhc(double x, double beta) {
  const double y = x * beta;
  if (std::abs(y) < 1e-4) return beta * (1.0 - y + (2.0 / 3.0) * y * y - y * y * y / 3.0);
  return -std::expm1(-2.0 * y) / (2.0 * x);
}

// Block quantities, all multiplied by e^{beta E0} with E0 the ground energy.
struct ScaledBlocks {
  double ground_energy;
  double cosh_sigma, sinhc_sigma, low_sigma; // e^{-Jz b/2} cosh, e^{-Jz b/2} sinh/eta, e^{-Jz b/2}
  double cosh_psi, sinhc_psi, low_psi;       // same for the psi block with +Jz
  double partition;                          // scaled Z
  double exp_sigma, exp_psi;                 // e^{-2 eta beta}, e^{-2 xi beta}
  double g_sigma, g_psi;                     // lower-state weight of each block
};

inline ScaledBlocks scaled_blocks(const ModelParams& p, const EnergyScales& s, double beta) {
  ScaledBlocks k{};
  k.ground_energy = std::min(p.Jz / 2 - s.eta, -p.Jz / 2 - s.xi);
  // Weight of the lower state in each block: exp(-beta (E_lower - E0)) <= 1.
  const double g_sigma = std::exp(-beta * ((p.Jz / 2 - s.eta) - k.ground_energy));
  const double g_psi = std::exp(-beta * ((-p.Jz / 2 - s.xi) - k.ground_energy));
  const double e_sigma = std::exp(-2.0 * s.eta * beta);
  const double e_psi = std::exp(-2.0 * s.xi * beta);

  k.cosh_sigma = g_sigma * (1.0 + e_sigma) / 2.0;
  k.sinhc_sigma = g_sigma * scaled_sinhc(s.eta, beta);
  k.low_sigma = g_sigma * std::exp(-s.eta * beta);
  k.cosh_psi = g_psi * (1.0 + e_psi) / 2.0;
  k.sinhc_psi = g_psi * scaled_sinhc(s.xi, beta);
  k.low_psi = g_psi * std::exp(-s.xi * beta);
  k.partition = 2.0 * (k.cosh_sigma + k.cosh_psi);
  k.exp_sigma = e_sigma;
  k.exp_psi = e_psi;
  k.g_sigma = g_sigma;
  k.g_psi = g_psi;
  return k;
}

// Scaled block populations cosh -+ (field/x) sinh for a 2x2 block with
// half-splitting x = sqrt(field^2 + coupling^2). Written as
//   g/(2x) [(x -+ field) + e^{-2 x beta} (x +- field)]
// with the small one of x -+ field taken as coupling^2/(x + |field|), so a
// strongly polarized block keeps full relative precision.
inline std::pair<double, double> block_populations(double x, double field, double coupling,
                                                   double beta, double g, double e,
                                                   double cosh_s, double sinhc_s) {
  if (x == 0.0 || x * beta < 1e-4) return {cosh_s - field * sinhc_s, cosh_s + field * sinhc_s};
  const double big = x + std::abs(field);
  const double small = coupling * coupling / big;
  const double x_minus = field >= 0 ? small : big; // x - field
  const double x_plus = field >= 0 ? big : small;  // x + field
  const double pre = g / (2.0 * x);
  return {pre * (x_minus + e * x_plus), pre * (x_plus + e * x_minus)};
}

} // namespace detail

/// Z = 2[e^{-Jz beta/2} cosh(eta beta) + e^{Jz beta/2} cosh(xi beta)]. May
/// overflow to +inf for extreme beta; the state itself never does.
inline double partition_function(const ModelParams& p, Temperature t) {
  const auto s = energy_scales(p);
  const auto k = detail::scaled_blocks(p, s, t.beta());
  return k.partition * std::exp(-t.beta() * k.ground_energy);
}

/// Closed-form Gibbs state.
inline GibbsXState gibbs_closed(const ModelParams& p, Temperature t) {
  const auto s = energy_scales(p);
  const double beta = t.beta();
  const auto k = detail::scaled_blocks(p, s, beta);
  const double zs = k.partition;

  GibbsXState g;
  const auto [mu_p, mu_m] = detail::block_populations(
      s.eta, p.B, p.J * p.gamma, beta, k.g_sigma, k.exp_sigma, k.cosh_sigma, k.sinhc_sigma);
  const auto [w_1, w_2] = detail::block_populations(s.xi, p.b, p.J, beta, k.g_psi, k.exp_psi,
                                                    k.cosh_psi, k.sinhc_psi);
  g.mu_plus = mu_p / zs;
  g.mu_minus = mu_m / zs;
  g.omega1 = w_1 / zs;
  g.omega2 = w_2 / zs;
  g.z = -p.J * k.sinhc_psi / zs;
  g.v = -p.J * p.gamma * k.sinhc_sigma / zs;
  g.partition = zs * std::exp(-beta * k.ground_energy);
  return g;
}

/// Both numeric routes to exp(-beta H), each normalized to unit trace.
struct OracleRoutes {
  Mat4 spectral{}; ///< sum_k e^{-beta E_k} |k><k| over the Jacobi eigensystem
  Mat4 series{};   ///< scaling-and-squaring Taylor exponential
  double partition = 0;
};

inline OracleRoutes gibbs_oracle_routes(const ModelParams& p, Temperature t) {
  const double beta = t.beta();
  const auto h = build_hamiltonian(p);
  OracleRoutes out;

  const auto eig = jacobi_eigen(h.entries);
  const double e_min = *std::min_element(eig.values.begin(), eig.values.end());
  double trace = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const double w = std::exp(-beta * (eig.values[k] - e_min));
    trace += w;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        out.spectral[i][j] += w * eig.vectors[i][k] * eig.vectors[j][k];
  }
  for (auto& row : out.spectral)
    for (auto& e : row) e /= trace;
  out.partition = trace * std::exp(-beta * e_min);

  // Shift by the Gershgorin lower bound so exp(-beta (H - c)) has spectral
  // radius <= 1; the shift cancels in the normalization.
  double lower = h.entries[0][0];
  for (std::size_t i = 0; i < 4; ++i) {
    double radius = 0;
    for (std::size_t j = 0; j < 4; ++j)
      if (j != i) radius += std::abs(h.entries[i][j]);
    lower = std::min(lower, h.entries[i][i] - radius);
  }
  Mat4 a{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      a[i][j] = -beta * (h.entries[i][j] - (i == j ? lower : 0.0));
  out.series = expm_taylor(a);
  double series_trace = 0;
  for (std::size_t i = 0; i < 4; ++i) series_trace += out.series[i][i];
  if (!(series_trace > 0) || !std::isfinite(series_trace))
    throw NumericFailure("gibbs_oracle: series exponential lost all weight (beta too large)");
  for (auto& row : out.series)
    for (auto& e : row) e /= series_trace;
  return out;
}

/// Gibbs state from the numeric routes; throws InternalInconsistency when
/// the routes disagree beyond 1e-10 or the result leaves the X pattern.
inline GibbsXState gibbs_oracle(const ModelParams& p, Temperature t) {
  const auto r = gibbs_oracle_routes(p, t);
  const double diff = max_abs_diff(r.spectral, r.series);
  if (diff > 1e-10)
    throw InternalInconsistency("gibbs_oracle: spectral and series routes differ by " +
                                std::to_string(diff));
  const auto& m = r.spectral;
  constexpr std::size_t outside[][2] = {{0, 1}, {0, 2}, {1, 3}, {2, 3}};
  for (const auto& ij : outside)
    if (std::abs(m[ij[0]][ij[1]]) > 1e-12 || std::abs(m[ij[1]][ij[0]]) > 1e-12)
      throw InternalInconsistency("gibbs_oracle: state is not of X form");

  GibbsXState g;
  g.mu_plus = m[0][0];
  g.omega1 = m[1][1];
  g.omega2 = m[2][2];
  g.mu_minus = m[3][3];
  g.z = (m[1][2] + m[2][1]) / 2;
  g.v = (m[0][3] + m[3][0]) / 2;
  g.partition = r.partition;
  return g;
}

/// T = 0 state: uniform mixture over the lowest eigenspace. Eigenvalues
/// within degeneracy_tolerance of the minimum count as degenerate.
inline GibbsXState ground_state_density(const ModelParams& p) {
  const auto s = energy_scales(p);
  const auto es = eigensystem_closed(p);
  const double tol = degeneracy_tolerance(s);
  double e_min = es.pairs[0].energy;
  for (const auto& pr : es.pairs) e_min = std::min(e_min, pr.energy);

  Mat4 rho{};
  int count = 0;
  for (const auto& pr : es.pairs) {
    if (pr.energy - e_min > tol) continue;
    ++count;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) rho[i][j] += pr.vector[i] * pr.vector[j];
  }
  GibbsXState g;
  g.mu_plus = rho[0][0] / count;
  g.omega1 = rho[1][1] / count;
  g.omega2 = rho[2][2] / count;
  g.mu_minus = rho[3][3] / count;
  g.z = rho[1][2] / count;
  g.v = rho[0][3] / count;
  g.partition = count;
  return g;
}

} // namespace xyzent
