#pragma once

// Fixed-size n x n helpers for n <= 3, stored in 3x3 arrays with the
// top-left n x n block active. Enough linear algebra for compression
// tensors and field checks; no external dependency.

#include <array>
#include <cmath>
#include <stdexcept>

#include "continuum/particles.hpp"

namespace continuum {

using Mat3 = std::array<std::array<double, 3>, 3>;

inline Mat3 mat3_zero() { return Mat3{{{0, 0, 0}, {0, 0, 0}, {0, 0, 0}}}; }

inline Mat3 mat3_identity(int n, double scale = 1.0) {
  Mat3 m = mat3_zero();
  for (int i = 0; i < n; ++i) m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = scale;
  return m;
}

inline double det(const Mat3& m, int n) {
  switch (n) {
    case 1:
      return m[0][0];
    case 2:
      return m[0][0] * m[1][1] - m[0][1] * m[1][0];
    case 3:
      return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
             m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
             m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    default:
      throw std::invalid_argument("det: dimension must be 1..3");
  }
}

// Adjugate (transposed cofactor matrix): adj(M) * M = det(M) * I.
inline Mat3 adjugate(const Mat3& m, int n) {
  Mat3 a = mat3_zero();
  switch (n) {
    case 1:
      a[0][0] = 1.0;
      return a;
    case 2:
      a[0][0] = m[1][1];
      a[0][1] = -m[0][1];
      a[1][0] = -m[1][0];
      a[1][1] = m[0][0];
      return a;
    case 3:
      a[0][0] = m[1][1] * m[2][2] - m[1][2] * m[2][1];
      a[0][1] = m[0][2] * m[2][1] - m[0][1] * m[2][2];
      a[0][2] = m[0][1] * m[1][2] - m[0][2] * m[1][1];
      a[1][0] = m[1][2] * m[2][0] - m[1][0] * m[2][2];
      a[1][1] = m[0][0] * m[2][2] - m[0][2] * m[2][0];
      a[1][2] = m[0][2] * m[1][0] - m[0][0] * m[1][2];
      a[2][0] = m[1][0] * m[2][1] - m[1][1] * m[2][0];
      a[2][1] = m[0][1] * m[2][0] - m[0][0] * m[2][1];
      a[2][2] = m[0][0] * m[1][1] - m[0][1] * m[1][0];
      return a;
    default:
      throw std::invalid_argument("adjugate: dimension must be 1..3");
  }
}

inline Mat3 inverse(const Mat3& m, int n) {
  const double d = det(m, n);
  if (d == 0.0) throw std::domain_error("inverse: singular matrix");
  Mat3 a = adjugate(m, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] /= d;
  return a;
}

inline Mat3 matmul(const Mat3& a, const Mat3& b, int n) {
  Mat3 c = mat3_zero();
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j)
        c[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
            aik * b[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
  return c;
}

inline Vec3 matvec(const Mat3& a, const Vec3& v, int n) {
  Vec3 out{0, 0, 0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(i)] +=
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(j)];
  return out;
}

// A^T v without materialising the transpose.
inline Vec3 matvec_t(const Mat3& a, const Vec3& v, int n) {
  Vec3 out{0, 0, 0};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out[static_cast<std::size_t>(j)] +=
          a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * v[static_cast<std::size_t>(i)];
  return out;
}

inline double trace(const Mat3& m, int n) {
  double t = 0.0;
  for (int i = 0; i < n; ++i) t += m[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
  return t;
}

}  // namespace continuum
