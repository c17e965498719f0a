#pragma once

// Exact construction of continuations (ODE -> PDE) and discretizations
// (PDE -> ODE) for linear spatially invariant 1D systems.
//
// The two directions are algebraic inverses on a square stencil:
//
//   continuation:    c_k = sum_j a_j s_j^k            (k = 0..d)
//   discretization:  a   = S^{-1} c                   (S_{kj} = s_j^k)
//
// All arithmetic is exact rational. Discretization weights are produced via
// Lagrange basis polynomials rather than a generic linear solve; the test
// suite checks them against an independent Gaussian-elimination oracle.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "continuum/rational.hpp"

namespace continuum {

// Ordered set of distinct lattice offsets s_1..s_N, stored sorted ascending.
class Stencil {
 public:
  Stencil() = default;

  explicit Stencil(std::vector<std::int64_t> shifts) : shifts_(std::move(shifts)) {
    if (shifts_.empty()) throw validity_error("stencil must contain at least one shift");
    std::sort(shifts_.begin(), shifts_.end());
    if (std::adjacent_find(shifts_.begin(), shifts_.end()) != shifts_.end())
      throw validity_error("stencil shifts must be pairwise distinct");
  }

  std::size_t size() const { return shifts_.size(); }
  std::int64_t shift(std::size_t j) const { return shifts_[j]; }
  const std::vector<std::int64_t>& shifts() const { return shifts_; }

  bool operator==(const Stencil& other) const { return shifts_ == other.shifts_; }

 private:
  std::vector<std::int64_t> shifts_;
};

// Linear spatially invariant ODE  d rho_i / dt = sum_j a_j rho_{i+s_j},
// with nodes spaced dx apart. Gains are permuted into the stencil's
// canonical ascending order on construction.
struct LinearOdeSpec {
  Stencil stencil;
  std::vector<Rat> gains;
  Rat dx = 1;

  LinearOdeSpec() = default;

  LinearOdeSpec(std::vector<std::int64_t> shifts, std::vector<Rat> gains_in, Rat dx_in)
      : dx(std::move(dx_in)) {
    if (shifts.size() != gains_in.size())
      throw validity_error("gains must align with stencil shifts");
    if (dx <= 0) throw validity_error("dx must be positive");
    std::vector<std::size_t> perm(shifts.size());
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::sort(perm.begin(), perm.end(),
              [&](std::size_t a, std::size_t b) { return shifts[a] < shifts[b]; });
    std::vector<std::int64_t> sorted_shifts(shifts.size());
    gains.resize(shifts.size());
    for (std::size_t k = 0; k < perm.size(); ++k) {
      sorted_shifts[k] = shifts[perm[k]];
      gains[k] = gains_in[perm[k]];
    }
    stencil = Stencil(std::move(sorted_shifts));
  }

  std::size_t size() const { return stencil.size(); }
};

// Coefficients c_0..c_d of the continualized PDE, read as
//   d rho / dt = sum_k c_k dx^k / k! * d^k rho / dx^k.
// The dx^k/k! factor is applied only when exporting or evaluating, so the
// stored c_k stay exact rationals.
struct PdeCoefficients {
  std::vector<Rat> coeffs;  // c_0..c_d
  Rat dx = 1;

  PdeCoefficients() = default;
  PdeCoefficients(std::vector<Rat> c, Rat dx_in) : coeffs(std::move(c)), dx(std::move(dx_in)) {
    if (coeffs.empty()) throw validity_error("PDE must carry at least c_0");
    if (dx <= 0) throw validity_error("dx must be positive");
  }

  int order() const { return static_cast<int>(coeffs.size()) - 1; }

  // c_k * dx^k / k!, the coefficient actually multiplying d^k rho / dx^k.
  Rat term_coefficient(int k) const {
    return coeffs[static_cast<std::size_t>(k)] * rat_pow(dx, k) / rat_factorial(k);
  }
};

// Request to approximate d^m rho / dx^m on a given stencil.
struct DerivativeRequest {
  int order = 0;  // m
  Stencil stencil;
  Rat dx = 1;
};

// rows x N matrix with entry (k, j) = s_j^k, 0^0 = 1.
inline std::vector<std::vector<Rat>> vandermonde(const Stencil& stencil, int rows) {
  if (rows < 1) throw std::invalid_argument("vandermonde: rows must be >= 1");
  std::vector<std::vector<Rat>> m(static_cast<std::size_t>(rows),
                                  std::vector<Rat>(stencil.size()));
  for (std::size_t j = 0; j < stencil.size(); ++j) {
    Rat p = 1;
    for (int k = 0; k < rows; ++k) {
      m[static_cast<std::size_t>(k)][j] = p;
      p *= Rat(stencil.shift(j));
    }
  }
  return m;
}

// Power sums c_k = sum_j gains_j * offsets_j^k for k = 0..d. This is the
// continuation formula over arbitrary rational offsets; integer stencils and
// graph-continuation classes (with half-integer positions) both route here.
inline std::vector<Rat> power_sum_coefficients(const std::vector<Rat>& offsets,
                                               const std::vector<Rat>& gains, int d) {
  if (offsets.size() != gains.size())
    throw std::invalid_argument("power_sum_coefficients: size mismatch");
  std::vector<Rat> c(static_cast<std::size_t>(d) + 1, Rat(0));
  for (std::size_t j = 0; j < offsets.size(); ++j) {
    Rat p = 1;
    for (int k = 0; k <= d; ++k) {
      c[static_cast<std::size_t>(k)] += gains[j] * p;
      p *= offsets[j];
    }
  }
  return c;
}

enum class ValidityCheck { enforced, unchecked };

// ODE -> PDE continuation of order d. Rejects d+1 < N (no valid
// discretization back exists in that case) unless explicitly unchecked.
inline PdeCoefficients continue_linear(const LinearOdeSpec& ode, int d,
                                       ValidityCheck check = ValidityCheck::enforced) {
  if (d < 0) throw std::invalid_argument("continue_linear: order must be >= 0");
  if (check == ValidityCheck::enforced &&
      static_cast<std::size_t>(d) + 1 < ode.size()) {
    throw validity_error("continuation of order " + std::to_string(d) + " on " +
                         std::to_string(ode.size()) +
                         " stencil points is not valid (requires d + 1 >= N)");
  }
  std::vector<Rat> offsets(ode.size());
  for (std::size_t j = 0; j < ode.size(); ++j) offsets[j] = Rat(ode.stencil.shift(j));
  return PdeCoefficients(power_sum_coefficients(offsets, ode.gains, d), ode.dx);
}

// Coefficients of the Lagrange basis polynomial L_j over the given nodes:
// L_j(t) = prod_{k != j} (t - t_k) / (t_j - t_k), returned as c_0..c_{N-1}.
inline std::vector<Rat> lagrange_basis_coefficients(const std::vector<Rat>& nodes,
                                                    std::size_t j) {
  const std::size_t n = nodes.size();
  std::vector<Rat> poly;
  poly.reserve(n);
  poly.push_back(1);
  Rat denom = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (k == j) continue;
    // poly *= (t - nodes[k])
    poly.push_back(0);
    for (std::size_t m = poly.size() - 1; m > 0; --m)
      poly[m] = poly[m - 1] - nodes[k] * poly[m];
    poly[0] = -nodes[k] * poly[0];
    denom *= nodes[j] - nodes[k];
  }
  for (auto& c : poly) c /= denom;
  poly.resize(n, Rat(0));
  return poly;
}

// Finite-difference weights over arbitrary distinct rational nodes: replaces
// sum_k c_k / k! * (relative offset)^k-weighted derivative stack, i.e. solves
// S a = c exactly with S_{kj} = nodes_j^k. Entry point shared by
// discretize_derivative and discretize_pde.
inline std::vector<Rat> solve_stencil_weights(const std::vector<Rat>& nodes,
                                              const std::vector<Rat>& rhs) {
  const std::size_t n = nodes.size();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      if (nodes[a] == nodes[b])
        throw validity_error("degenerate input: repeated stencil point");
  if (rhs.size() != n) throw std::invalid_argument("solve_stencil_weights: size mismatch");
  // a_j = sum_m lambda_{jm} c_m where lambda are Lagrange coefficients:
  // (S^{-1})_{jm} equals the t^m coefficient of L_j.
  std::vector<Rat> weights(n, Rat(0));
  for (std::size_t j = 0; j < n; ++j) {
    const std::vector<Rat> basis = lagrange_basis_coefficients(nodes, j);
    Rat acc = 0;
    for (std::size_t m = 0; m < n; ++m) acc += basis[m] * rhs[m];
    weights[j] = acc;
  }
  return weights;
}

// Classical finite-difference weights for d^m/dx^m on the request's stencil:
// a = S^{-1} c with c = (m!/dx^m) e_{m+1}.
inline std::vector<Rat> discretize_derivative(const DerivativeRequest& req) {
  const std::size_t n = req.stencil.size();
  if (req.order < 0 || static_cast<std::size_t>(req.order) >= n)
    throw validity_error("derivative order must satisfy m < N");
  std::vector<Rat> nodes(n);
  for (std::size_t j = 0; j < n; ++j) nodes[j] = Rat(req.stencil.shift(j));
  std::vector<Rat> rhs(n, Rat(0));
  rhs[static_cast<std::size_t>(req.order)] =
      rat_factorial(req.order) / rat_pow(req.dx, req.order);
  return solve_stencil_weights(nodes, rhs);
}

// PDE -> ODE discretization on the given stencil. Each derivative term of
// the PDE is replaced by its finite difference; the dx^k/k! factors cancel
// exactly so the gains come out as a = S^{-1} c.
inline LinearOdeSpec discretize_pde(const PdeCoefficients& pde, const Stencil& stencil) {
  const std::size_t n = stencil.size();
  std::size_t highest = 0;
  for (std::size_t k = 0; k < pde.coeffs.size(); ++k)
    if (pde.coeffs[k] != 0) highest = k;
  if (highest + 1 > n)
    throw validity_error("insufficient stencil points for derivative of order " +
                         std::to_string(highest));
  std::vector<Rat> nodes(n);
  for (std::size_t j = 0; j < n; ++j) nodes[j] = Rat(stencil.shift(j));
  std::vector<Rat> rhs(n, Rat(0));
  for (std::size_t k = 0; k < n && k < pde.coeffs.size(); ++k) rhs[k] = pde.coeffs[k];
  return LinearOdeSpec(stencil.shifts(), solve_stencil_weights(nodes, rhs), pde.dx);
}

struct RoundTripResult {
  bool identity = false;        // recovered == original and extras exactly zero
  LinearOdeSpec recovered;      // discretization on the augmented stencil
};

// Continues the ODE to order d and discretizes back on the original stencil
// augmented with extra_shifts (total points must equal d + 1).
inline RoundTripResult round_trip_check(const LinearOdeSpec& ode, int d,
                                        const std::vector<std::int64_t>& extra_shifts) {
  const PdeCoefficients pde = continue_linear(ode, d);
  std::vector<std::int64_t> all = ode.stencil.shifts();
  all.insert(all.end(), extra_shifts.begin(), extra_shifts.end());
  if (all.size() != static_cast<std::size_t>(d) + 1)
    throw validity_error("round trip requires exactly d + 1 total stencil points");
  const Stencil augmented(all);  // also rejects duplicated extras
  RoundTripResult result;
  result.recovered = discretize_pde(pde, augmented);
  result.identity = true;
  for (std::size_t j = 0; j < augmented.size(); ++j) {
    const std::int64_t s = augmented.shift(j);
    const auto& orig = ode.stencil.shifts();
    const auto it = std::lower_bound(orig.begin(), orig.end(), s);
    const Rat expected = (it != orig.end() && *it == s)
                             ? ode.gains[static_cast<std::size_t>(it - orig.begin())]
                             : Rat(0);
    if (result.recovered.gains[j] != expected) {
      result.identity = false;
      break;
    }
  }
  return result;
}

// Order of accuracy d + 1 - N of the continuation, with the requested order
// bumped past trailing vanishing coefficients (a symmetric stencil reports
// its bonus order). The probe stops at d + 8.
inline int order_of_accuracy(const LinearOdeSpec& ode, int d) {
  if (static_cast<std::size_t>(d) + 1 < ode.size())
    throw validity_error("order_of_accuracy requires a valid continuation (d + 1 >= N)");
  constexpr int kProbe = 8;
  const PdeCoefficients probed = continue_linear(ode, d + kProbe, ValidityCheck::unchecked);
  int effective = d;
  while (effective < d + kProbe &&
         probed.coeffs[static_cast<std::size_t>(effective) + 1] == 0)
    ++effective;
  return effective + 1 - static_cast<int>(ode.size());
}

}  // namespace continuum
