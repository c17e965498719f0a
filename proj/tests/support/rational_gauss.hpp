#pragma once

// Test-only oracle: plain Gaussian elimination with partial pivoting over
// exact rationals. Deliberately independent of the Lagrange-basis route the
// library uses for stencil weights.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "continuum/rational.hpp"

namespace continuum::testing {

inline std::vector<Rat> gauss_solve(std::vector<std::vector<Rat>> a, std::vector<Rat> b) {
  const std::size_t n = a.size();
  if (n == 0 || b.size() != n) throw std::invalid_argument("gauss_solve: bad shapes");
  for (const auto& row : a)
    if (row.size() != n) throw std::invalid_argument("gauss_solve: not square");

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) throw std::runtime_error("gauss_solve: singular matrix");
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t row = col + 1; row < n; ++row) {
      if (a[row][col] == 0) continue;
      const Rat factor = a[row][col] / a[col][col];
      for (std::size_t k = col; k < n; ++k) a[row][k] -= factor * a[col][k];
      b[row] -= factor * b[col];
    }
  }
  std::vector<Rat> x(n, Rat(0));
  for (std::size_t row = n; row-- > 0;) {
    Rat acc = b[row];
    for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * x[k];
    x[row] = acc / a[row][row];
  }
  return x;
}

// Finite-difference weights for d^m/dx^m on the given shifts, solved by
// Gaussian elimination (the classical route).
inline std::vector<Rat> fd_weights_oracle(const std::vector<std::int64_t>& shifts, int m,
                                          const Rat& dx) {
  const std::size_t n = shifts.size();
  std::vector<std::vector<Rat>> s(n, std::vector<Rat>(n));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t j = 0; j < n; ++j) s[k][j] = rat_pow(Rat(shifts[j]), static_cast<std::int64_t>(k));
  std::vector<Rat> rhs(n, Rat(0));
  rhs[static_cast<std::size_t>(m)] = rat_factorial(m) / rat_pow(dx, m);
  return gauss_solve(std::move(s), std::move(rhs));
}

// Deterministic 64-bit generator for property tests (seeded, reproducible).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  std::uint64_t next() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive
    return lo + static_cast<std::int64_t>(next() %
                                          static_cast<std::uint64_t>(hi - lo + 1));
  }

  double uniform(double lo, double hi) {
    const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  Rat rational(std::int64_t max_num, std::int64_t max_den) {
    const std::int64_t num = uniform_int(-max_num, max_num);
    const std::int64_t den = uniform_int(1, max_den);
    return Rat(num) / den;
  }

 private:
  std::uint64_t state_;
};

}  // namespace continuum::testing
