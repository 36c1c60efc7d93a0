#pragma once

// Two-qubit anisotropic XYZ Heisenberg chain in an inhomogeneous field.
//
// Basis order |00>, |01>, |10>, |11> with |0> the +1 eigenvector of sigma_z.
// The Hamiltonian is an X matrix:
//
//   [ Jz/2 + B     0          0        J*gamma  ]
//   [   0      -Jz/2 + b      J           0     ]
//   [   0          J      -Jz/2 - b       0     ]
//   [ J*gamma      0          0       Jz/2 - B  ]
//
// Energies are in natural units (k_B = hbar = 1).

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "matrix4.hpp"

namespace xyzent {

struct ModelParams {
  double J = 1.0;     ///< (Jx + Jy) / 2
  double gamma = 0.0; ///< (Jx - Jy) / (Jx + Jy)
  double Jz = 0.0;
  double B = 0.0; ///< uniform field
  double b = 0.0; ///< inhomogeneity; sites see B + b and B - b

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

inline void validate(const ModelParams& p) {
  const auto check = [](double v, std::string_view name) {
    if (!std::isfinite(v))
      throw InvalidParameter("model parameter '" + std::string(name) + "' must be finite");
  };
  check(p.J, "J");
  check(p.gamma, "gamma");
  check(p.Jz, "Jz");
  check(p.B, "B");
  check(p.b, "b");
}

struct EnergyScales {
  double eta = 0.0; ///< sqrt(B^2 + J^2 gamma^2), half-splitting of the |00>,|11> block
  double xi = 0.0;  ///< sqrt(b^2 + J^2), half-splitting of the |01>,|10> block
};

inline EnergyScales energy_scales(const ModelParams& p) {
  validate(p);
  return {std::hypot(p.B, p.J * p.gamma), std::hypot(p.b, p.J)};
}

struct HamiltonianMatrix {
  Mat4 entries{};
};

inline HamiltonianMatrix build_hamiltonian(const ModelParams& p) {
  validate(p);
  HamiltonianMatrix h;
  auto& m = h.entries;
  m[0][0] = p.Jz / 2 + p.B;
  m[1][1] = -p.Jz / 2 + p.b;
  m[2][2] = -p.Jz / 2 - p.b;
  m[3][3] = p.Jz / 2 - p.B;
  m[0][3] = m[3][0] = p.J * p.gamma;
  m[1][2] = m[2][1] = p.J;
  return h;
}

enum class EigenLabel { psi_plus, psi_minus, sigma_plus, sigma_minus };

inline std::string_view to_string(EigenLabel l) {
  switch (l) {
  case EigenLabel::psi_plus: return "psi+";
  case EigenLabel::psi_minus: return "psi-";
  case EigenLabel::sigma_plus: return "sigma+";
  case EigenLabel::sigma_minus: return "sigma-";
  }
  return "?";
}

struct EigenPair {
  double energy = 0.0;
  Vec4 vector{};
};

/// Eigenpairs indexed by EigenLabel.
struct EigenSystem {
  std::array<EigenPair, 4> pairs{};

  const EigenPair& operator[](EigenLabel l) const { return pairs[static_cast<std::size_t>(l)]; }
  EigenPair& operator[](EigenLabel l) { return pairs[static_cast<std::size_t>(l)]; }

  std::array<double, 4> sorted_energies() const {
    std::array<double, 4> e{};
    for (std::size_t i = 0; i < 4; ++i) e[i] = pairs[i].energy;
    std::sort(e.begin(), e.end());
    return e;
  }
};

namespace detail {

struct BlockPair {
  double upper_energy, lower_energy;
  std::array<double, 2> upper, lower; // components on (first, second) basis state
};

// Eigenpairs of [[c + d, o], [o, c - d]] with r = sqrt(d^2 + o^2):
// (first, second) proportional to ((d +/- r)/o, 1), normalized by
// 1/sqrt(1 + (d +/- r)^2/o^2). The cancelling ratio is rewritten via
// (d + r)(d - r) = -o^2. For o == 0 the block is already diagonal.
inline BlockPair solve_block(double c, double d, double o, double r) {
  BlockPair out{c + r, c - r, {}, {}};
  if (o == 0.0) {
    if (d >= 0) {
      out.upper = {1.0, 0.0};
      out.lower = {0.0, 1.0};
    } else {
      out.upper = {0.0, 1.0};
      out.lower = {1.0, 0.0};
    }
    return out;
  }
  double ratio_plus = 0, ratio_minus = 0;
  if (d >= 0) {
    ratio_plus = (d + r) / o;
    ratio_minus = -o / (d + r);
  } else {
    ratio_minus = (d - r) / o;
    ratio_plus = -o / (d - r);
  }
  const double n_plus = 1.0 / std::hypot(1.0, ratio_plus);
  const double n_minus = 1.0 / std::hypot(1.0, ratio_minus);
  out.upper = {n_plus * ratio_plus, n_plus};
  out.lower = {n_minus * ratio_minus, n_minus};
  return out;
}

} // namespace detail

/// Closed-form eigensystem:
///   H|psi+-> = (-Jz/2 +- xi)|psi+->,     |psi+->   = N+-[(b +- xi)/J |01> + |10>]
///   H|Sigma+-> = (Jz/2 +- eta)|Sigma+->, |Sigma+-> = M+-[(B +- eta)/(J gamma) |00> + |11>]
/// When J = 0 (or J gamma = 0) the block is diagonal and basis vectors are
/// returned, with the "+" label on the larger energy.
inline EigenSystem eigensystem_closed(const ModelParams& p) {
  const auto s = energy_scales(p);
  EigenSystem es;

  const auto psi = detail::solve_block(-p.Jz / 2, p.b, p.J, s.xi);
  es[EigenLabel::psi_plus] = {psi.upper_energy, {0.0, psi.upper[0], psi.upper[1], 0.0}};
  es[EigenLabel::psi_minus] = {psi.lower_energy, {0.0, psi.lower[0], psi.lower[1], 0.0}};

  const auto sig = detail::solve_block(p.Jz / 2, p.B, p.J * p.gamma, s.eta);
  es[EigenLabel::sigma_plus] = {sig.upper_energy, {sig.upper[0], 0.0, 0.0, sig.upper[1]}};
  es[EigenLabel::sigma_minus] = {sig.lower_energy, {sig.lower[0], 0.0, 0.0, sig.lower[1]}};
  return es;
}

/// Generic Jacobi diagonalization with labels recovered from block support
/// ({|01>,|10>} for psi, {|00>,|11>} for Sigma; higher energy gets "+").
inline EigenSystem eigensystem_numeric(const HamiltonianMatrix& h) {
  const auto& m = h.entries;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < i; ++j)
      if (m[i][j] != m[j][i]) throw InvalidParameter("eigensystem_numeric: matrix not symmetric");

  const auto eig = jacobi_eigen(m);

  std::array<std::size_t, 2> psi_idx{}, sig_idx{};
  std::size_t n_psi = 0, n_sig = 0;
  for (std::size_t k = 0; k < 4; ++k) {
    const auto& v = eig.vectors;
    const double w_center = v[1][k] * v[1][k] + v[2][k] * v[2][k];
    const double w_corner = v[0][k] * v[0][k] + v[3][k] * v[3][k];
    if (w_center >= w_corner) {
      if (n_psi == 2) throw NumericFailure("eigensystem_numeric: block labels not separable");
      psi_idx[n_psi++] = k;
    } else {
      if (n_sig == 2) throw NumericFailure("eigensystem_numeric: block labels not separable");
      sig_idx[n_sig++] = k;
    }
  }

  const auto column = [&](std::size_t k) {
    return Vec4{eig.vectors[0][k], eig.vectors[1][k], eig.vectors[2][k], eig.vectors[3][k]};
  };
  const auto assign = [&](std::array<std::size_t, 2> idx, EigenLabel plus, EigenLabel minus,
                          EigenSystem& es) {
    if (eig.values[idx[0]] < eig.values[idx[1]]) std::swap(idx[0], idx[1]);
    es[plus] = {eig.values[idx[0]], column(idx[0])};
    es[minus] = {eig.values[idx[1]], column(idx[1])};
  };

  EigenSystem es;
  assign(psi_idx, EigenLabel::psi_plus, EigenLabel::psi_minus, es);
  assign(sig_idx, EigenLabel::sigma_plus, EigenLabel::sigma_minus, es);
  return es;
}

} // namespace xyzent
