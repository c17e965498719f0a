#pragma once

// Lattice sums behind the pressure law: beta(r) collects the outer products
// of the lexicographically positive multi-indices of squared norm r^2,
//   sum_{q > 0, |q| = r} q q^T = beta(r) I,   beta(r) = r^2 / n * #_r q,
// and the pressure series P = sum_r beta(r)/r * l^{1-n} f(l r).

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "continuum/force_law.hpp"
#include "continuum/rational.hpp"

namespace continuum {

struct BetaResult {
  std::int64_t r_squared = 0;
  std::int64_t count = 0;                         // #_r q
  Rat beta = 0;                                   // r^2 * count / n
  std::array<std::array<std::int64_t, 3>, 3> qq_sum{};  // top-left n x n block
};

// First nonzero component positive: the canonical half-space selector that
// picks one of each antipodal pair.
inline bool lex_positive(const std::vector<std::int64_t>& q) {
  for (std::int64_t v : q) {
    if (v > 0) return true;
    if (v < 0) return false;
  }
  return false;
}

// Enumerates the positive multi-indices with |q|^2 = r2 and accumulates
// count and sum of outer products. Enumeration order is lexicographic over
// the cube [-r, r]^n, fixed for reproducibility.
inline BetaResult beta_sum(std::int64_t r2, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("beta_sum: dimension must be 1..3");
  if (r2 <= 0) throw std::invalid_argument("beta_sum: r^2 must be positive");
  BetaResult result;
  result.r_squared = r2;
  const std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r2))) + 1;
  std::vector<std::int64_t> q(static_cast<std::size_t>(n));
  std::function<void(int)> walk = [&](int axis) {
    if (axis == n) {
      std::int64_t norm2 = 0;
      for (std::int64_t v : q) norm2 += v * v;
      if (norm2 != r2 || !lex_positive(q)) return;
      ++result.count;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          result.qq_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
      return;
    }
    for (std::int64_t v = -r; v <= r; ++v) {
      q[static_cast<std::size_t>(axis)] = v;
      walk(axis + 1);
    }
  };
  walk(0);
  result.beta = Rat(r2) * result.count / n;
  return result;
}

// All beta values for r^2 = 1..r2_max in one lattice pass.
inline std::vector<BetaResult> beta_table(std::int64_t r2_max, int n) {
  if (n < 1 || n > 3) throw std::invalid_argument("beta_table: dimension must be 1..3");
  if (r2_max < 1) throw std::invalid_argument("beta_table: r^2 cap must be >= 1");
  std::vector<BetaResult> table(static_cast<std::size_t>(r2_max));
  for (std::int64_t m = 1; m <= r2_max; ++m) table[static_cast<std::size_t>(m - 1)].r_squared = m;
  const std::int64_t r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(r2_max))) + 1;
  std::vector<std::int64_t> q(static_cast<std::size_t>(n));
  std::function<void(int)> walk = [&](int axis) {
    if (axis == n) {
      std::int64_t norm2 = 0;
      for (std::int64_t v : q) norm2 += v * v;
      if (norm2 < 1 || norm2 > r2_max || !lex_positive(q)) return;
      BetaResult& slot = table[static_cast<std::size_t>(norm2 - 1)];
      ++slot.count;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          slot.qq_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] +=
              q[static_cast<std::size_t>(i)] * q[static_cast<std::size_t>(j)];
      return;
    }
    for (std::int64_t v = -r; v <= r; ++v) {
      q[static_cast<std::size_t>(axis)] = v;
      walk(axis + 1);
    }
  };
  walk(0);
  for (auto& slot : table) slot.beta = Rat(slot.r_squared) * slot.count / n;
  return table;
}

enum class InteractionTopology { all_to_all, grid };

struct PressureModel {
  InteractionTopology topology = InteractionTopology::all_to_all;
  double truncation_radius = 10.0;  // r cap for the all-to-all series
};

struct PressureResult {
  double value = 0.0;
  double tail_bound = 0.0;  // bound on the dropped all-to-all terms
  std::int64_t terms = 0;
};

// Pressure at specific distance l. Grid topology has the closed form
// f(l)/l^{n-1}; the all-to-all series is truncated at the model's radius
// with a tail bound from the decay integral (surface measure of the lattice
// shell ~ S_n r^{n-1} / 2, doubled for shell fluctuation).
inline PressureResult pressure(const PressureModel& model, const ForceLaw& law, double l,
                               int n) {
  if (l <= 0) throw std::invalid_argument("pressure: specific distance must be positive");
  if (n < 1 || n > 3) throw std::invalid_argument("pressure: dimension must be 1..3");
  PressureResult result;
  if (model.topology == InteractionTopology::grid) {
    result.value = law.f(l) / std::pow(l, n - 1);
    result.terms = 1;
    return result;
  }
  const DecayCheck decay = law.verify_decay(n);
  if (!decay.converged)
    throw validity_error("pressure series does not converge: the force magnitude "
                         "fails the decay condition integral s^(n-1) f(s) ds < inf");
  const double R = model.truncation_radius;
  const auto table = beta_table(static_cast<std::int64_t>(R * R), n);
  double acc = 0.0;
  for (const auto& entry : table) {
    if (entry.count == 0) continue;
    const double r = std::sqrt(static_cast<double>(entry.r_squared));
    acc += to_double(entry.beta) / r * std::pow(l, 1 - n) * law.f(l * r);
    ++result.terms;
  }
  result.value = acc;
  // Tail: sum_{r>R} ~ (S_n / 2n) integral_R^inf r^n f(l r) dr, doubled.
  const double surface = n == 1 ? 2.0 : (n == 2 ? 2.0 * M_PI : 4.0 * M_PI);
  double tail = 0.0;
  {
    const int steps = 2048;
    double a = R;
    for (int k = 0; k < 24; ++k) {
      const double b = 2.0 * a;
      const double h = (b - a) / steps;
      double seg = 0.0;
      for (int i = 0; i < steps; ++i) {
        const double x = a + (i + 0.5) * h;
        seg += h * std::pow(x, n) * std::abs(law.f(l * x));
      }
      tail += seg;
      if (seg < 1e-16 * std::max(1.0, tail)) break;
      a = b;
    }
  }
  result.tail_bound = 2.0 * (surface / (2.0 * n)) * std::pow(l, 1 - n) * tail;
  return result;
}

}  // namespace continuum
