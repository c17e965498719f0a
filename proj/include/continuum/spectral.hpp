#pragma once

// Frequency-domain symbols of a linear stencil ODE and of its continuation,
// pointwise convergence tables, and the stability classification driven by
// the sign of the leading even PDE coefficient.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "continuum/rational.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

// a_hat(omega) = sum_j a_j exp(i s_j dx omega). Periodic with period
// 2*pi/dx for integer shifts; equals sum_j a_j at omega = 0.
inline std::complex<double> ode_symbol_eval(const LinearOdeSpec& ode, double omega) {
  const double dx = to_double(ode.dx);
  std::complex<double> acc = 0.0;
  for (std::size_t j = 0; j < ode.size(); ++j) {
    const double phase = static_cast<double>(ode.stencil.shift(j)) * dx * omega;
    acc += to_double(ode.gains[j]) * std::complex<double>(std::cos(phase), std::sin(phase));
  }
  return acc;
}

// c_hat(omega) = sum_k c_k dx^k / k! (i omega)^k, the polynomial symbol of
// the continualized PDE.
inline std::complex<double> pde_symbol_eval(const PdeCoefficients& pde, double omega) {
  // Horner evaluation in (i omega).
  const std::complex<double> z(0.0, omega);
  std::complex<double> acc = 0.0;
  for (int k = pde.order(); k >= 0; --k)
    acc = acc * z + to_double(pde.term_coefficient(k));
  return acc;
}

// Uniform frequency grid; the default spans one full period of the Laurent
// symbol, omega in [-pi/dx, pi/dx], with 1001 samples.
inline std::vector<double> default_frequency_grid(const Rat& dx, std::size_t points = 1001) {
  const double half = M_PI / to_double(dx);
  std::vector<double> grid(points);
  if (points == 1) {
    grid[0] = 0.0;
    return grid;
  }
  for (std::size_t i = 0; i < points; ++i)
    grid[i] = -half + 2.0 * half * static_cast<double>(i) / static_cast<double>(points - 1);
  return grid;
}

struct PointwiseErrorTable {
  std::vector<double> omegas;
  std::vector<int> orders;                  // one row per continuation order
  std::vector<std::vector<double>> errors;  // errors[row][omega index]
};

// |c_hat_d(omega) - a_hat(omega)| for every order d = d_min..d_max over the
// frequency grid. Orders below N-1 are not valid continuations and are
// skipped.
inline PointwiseErrorTable pointwise_error(const LinearOdeSpec& ode, int d_max,
                                           const std::vector<double>& omega_grid) {
  PointwiseErrorTable table;
  table.omegas = omega_grid;
  const int d_min = static_cast<int>(ode.size()) - 1;
  for (int d = d_min; d <= d_max; ++d) {
    const PdeCoefficients pde = continue_linear(ode, d);
    std::vector<double> row(omega_grid.size());
    for (std::size_t i = 0; i < omega_grid.size(); ++i)
      row[i] = std::abs(pde_symbol_eval(pde, omega_grid[i]) -
                        ode_symbol_eval(ode, omega_grid[i]));
    table.orders.push_back(d);
    table.errors.push_back(std::move(row));
  }
  return table;
}

enum class StabilityKind { Stable, ArtificiallyUnstable, InheritsUnstable, Indeterminate };

struct StabilityWitness {
  double omega = 0.0;
  double real_part = 0.0;
};

struct StabilityVerdict {
  StabilityKind kind = StabilityKind::Indeterminate;
  std::optional<StabilityWitness> witness;  // present iff unstable
};

namespace detail {

inline StabilityWitness sampled_max_real(const PdeCoefficients& pde,
                                         const std::vector<double>& grid) {
  StabilityWitness best{grid.empty() ? 0.0 : grid.front(),
                        -std::numeric_limits<double>::infinity()};
  for (double w : grid) {
    const double re = pde_symbol_eval(pde, w).real();
    if (re > best.real_part) best = {w, re};
  }
  return best;
}

}  // namespace detail

// Stability of the polynomial symbol. The leading nonzero even coefficient
// k* decides the high-frequency behaviour: Re c_hat -> +inf (artificial
// instability) when c_{k*} > 0 for k* = 4m or c_{k*} < 0 for k* = 4m+2.
// An odd top order has the same stability as order d-1 (its top term is
// purely dispersive), so odd orders classify via their truncation:
//  - zero polynomial (possibly after truncation) -> Stable (trivial dynamics)
//  - only c_0 nonzero among even terms    -> sign of c_0 = sign of Re at
//    omega = 0, where PDE and ODE symbols agree exactly: c_0 > 0 means the
//    instability is inherited from the ODE, not introduced by truncation
//  - destabilising leading even sign      -> ArtificiallyUnstable
//  - stabilising leading even sign        -> Stable if the sampled real part
//    stays <= delta over a full symbol period, else InheritsUnstable
//    (mid-band positivity mirrors an unstable ODE symbol)
//  - no nonzero even coefficient          -> Indeterminate (purely
//    dispersive; the corollaries do not classify this case)
inline StabilityVerdict classify_stability(const PdeCoefficients& pde,
                                           std::size_t grid_points = 1001,
                                           double delta = 1e-9) {
  if (pde.order() % 2 == 1) {
    std::vector<Rat> truncated(pde.coeffs.begin(), pde.coeffs.end() - 1);
    return classify_stability(PdeCoefficients(std::move(truncated), pde.dx), grid_points,
                              delta);
  }

  bool all_zero = true;
  for (const Rat& c : pde.coeffs)
    if (c != 0) {
      all_zero = false;
      break;
    }
  if (all_zero) return {StabilityKind::Stable, std::nullopt};

  int k_star = -1;
  for (int k = pde.order(); k >= 0; --k) {
    if (k % 2 == 0 && pde.coeffs[static_cast<std::size_t>(k)] != 0) {
      k_star = k;
      break;
    }
  }
  if (k_star < 0) return {StabilityKind::Indeterminate, std::nullopt};

  const std::vector<double> grid = default_frequency_grid(pde.dx, grid_points);
  const Rat& lead = pde.coeffs[static_cast<std::size_t>(k_star)];

  if (k_star == 0) {
    // Re c_hat(0) = c_0 = a_hat(0) exactly.
    if (lead > 0) return {StabilityKind::InheritsUnstable, StabilityWitness{0.0, to_double(lead)}};
    return {StabilityKind::Stable, std::nullopt};
  }

  const bool destabilising = (k_star % 4 == 0) ? (lead > 0) : (lead < 0);
  if (destabilising) {
    // The polynomial's real part grows without bound, but positivity may sit
    // beyond one symbol period; widen the sampled range until the witness
    // actually exhibits a positive real part.
    StabilityWitness witness = detail::sampled_max_real(pde, grid);
    for (int doubling = 1; doubling <= 20 && witness.real_part <= delta; ++doubling) {
      const double half = std::ldexp(M_PI / to_double(pde.dx), doubling);
      std::vector<double> wide(grid_points);
      for (std::size_t i = 0; i < grid_points; ++i)
        wide[i] = -half + 2.0 * half * static_cast<double>(i) /
                              static_cast<double>(grid_points - 1);
      witness = detail::sampled_max_real(pde, wide);
    }
    return {StabilityKind::ArtificiallyUnstable, witness};
  }

  const StabilityWitness peak = detail::sampled_max_real(pde, grid);
  if (peak.real_part <= delta) return {StabilityKind::Stable, std::nullopt};
  return {StabilityKind::InheritsUnstable, peak};
}

// Valid continuation orders d in [N-1, d_max] whose verdict is Stable.
inline std::vector<int> stable_order_set(const LinearOdeSpec& ode, int d_max) {
  if (d_max > 64) throw std::invalid_argument("stable_order_set: d_max capped at 64");
  std::vector<int> stable;
  for (int d = static_cast<int>(ode.size()) - 1; d <= d_max; ++d) {
    if (d < 0) continue;
    const StabilityVerdict verdict = classify_stability(continue_linear(ode, d));
    if (verdict.kind == StabilityKind::Stable) stable.push_back(d);
  }
  return stable;
}

}  // namespace continuum
