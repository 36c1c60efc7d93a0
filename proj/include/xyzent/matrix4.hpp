#pragma once

// Dense 4x4 real matrix helpers used by the numeric verification paths:
// a cyclic Jacobi eigensolver and a scaling-and-squaring Taylor exponential.

#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "errors.hpp"

namespace xyzent {

using Vec4 = std::array<double, 4>;
using Mat4 = std::array<std::array<double, 4>, 4>;

inline constexpr Mat4 zero_mat4() { return Mat4{}; }

inline constexpr Mat4 identity_mat4() {
  Mat4 m{};
  for (std::size_t i = 0; i < 4; ++i) m[i][i] = 1.0;
  return m;
}

template <typename T>
using Mat4T = std::array<std::array<T, 4>, 4>;

template <typename T>
Mat4T<T> multiply(const Mat4T<T>& a, const Mat4T<T>& b) {
  Mat4T<T> c{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t k = 0; k < 4; ++k) {
      const T aik = a[i][k];
      if (aik == T(0)) continue;
      for (std::size_t j = 0; j < 4; ++j) c[i][j] += aik * b[k][j];
    }
  return c;
}

inline Vec4 multiply(const Mat4& a, const Vec4& v) {
  Vec4 r{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r[i] += a[i][j] * v[j];
  return r;
}

template <typename T>
T norm1(const Mat4T<T>& a) {
  T best = 0;
  for (std::size_t j = 0; j < 4; ++j) {
    T col = 0;
    for (std::size_t i = 0; i < 4; ++i) col += std::abs(a[i][j]);
    if (col > best) best = col;
  }
  return best;
}

inline double frobenius(const Mat4& a) {
  double s = 0;
  for (const auto& row : a)
    for (double x : row) s += x * x;
  return std::sqrt(s);
}

inline double off_diagonal_norm(const Mat4& a) {
  double s = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j) s += a[i][j] * a[i][j];
  return std::sqrt(s);
}

inline double max_abs_diff(const Mat4& a, const Mat4& b) {
  double d = 0;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) d = std::fmax(d, std::abs(a[i][j] - b[i][j]));
  return d;
}

struct SymmetricEigen {
  Vec4 values{};
  Mat4 vectors{}; ///< column k is the eigenvector of values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi diagonalization of a real symmetric 4x4 matrix. Stops once
/// the off-diagonal Frobenius norm is below 1e-14 * ||a||_F.
inline SymmetricEigen jacobi_eigen(const Mat4& input, int max_sweeps = 64) {
  Mat4 a = input;
  Mat4 v = identity_mat4();
  const double scale = frobenius(a);
  const double target = 1e-14 * scale;

  int sweep = 0;
  while (scale > 0 && off_diagonal_norm(a) > target) {
    if (sweep == max_sweeps)
      throw NumericFailure("jacobi_eigen: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps");
    ++sweep;
    for (std::size_t p = 0; p < 3; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::hypot(theta, 1.0));
        const double c = 1.0 / std::hypot(t, 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < 4; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < 4; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        a[p][q] = a[q][p] = 0.0;
        for (std::size_t k = 0; k < 4; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  SymmetricEigen out;
  for (std::size_t i = 0; i < 4; ++i) out.values[i] = a[i][i];
  out.vectors = v;
  out.sweeps = sweep;
  return out;
}

/// exp(a) by a truncated Taylor series on a / 2^s followed by s squarings.
/// Terms are added until the newest one is below 1e-18 relative to the sum.
/// Evaluated in long double; the extra bits absorb the squaring growth.
inline Mat4 expm_taylor(const Mat4& a) {
  using Ld = long double;
  Mat4T<Ld> x{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) x[i][j] = a[i][j];

  int squarings = 0;
  const Ld n = norm1(x);
  if (n > 0.5L) squarings = static_cast<int>(std::ceil(std::log2(n / 0.5L)));
  const Ld scale = std::ldexp(1.0L, -squarings);
  for (auto& row : x)
    for (auto& e : row) e *= scale;

  Mat4T<Ld> sum{};
  Mat4T<Ld> term{};
  for (std::size_t i = 0; i < 4; ++i) sum[i][i] = term[i][i] = 1.0L;
  for (int k = 1; k < 64; ++k) {
    term = multiply(term, x);
    for (auto& row : term)
      for (auto& e : row) e /= k;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) sum[i][j] += term[i][j];
    if (norm1(term) < 1e-18L * norm1(sum)) break;
  }
  for (int s = 0; s < squarings; ++s) sum = multiply(sum, sum);

  Mat4 out{};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) out[i][j] = static_cast<double>(sum[i][j]);
  return out;
}

} // namespace xyzent
