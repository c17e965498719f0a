#pragma once

// Continuation for multidimensional lattices: nodes indexed by multi-indices
// in Z^n, PDE coefficients keyed by nonnegative multi-indices h with
// |h| <= d and read as sum_h c_h dx^h / |h|! d^|h| rho / dx^h.

#include <cstdint>
#include <map>
#include <numeric>
#include <vector>

#include "continuum/rational.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

using MultiIndex = std::vector<std::int64_t>;

inline std::int64_t multi_abs(const MultiIndex& h) {
  return std::accumulate(h.begin(), h.end(), std::int64_t{0});
}

// x^h = prod_k x_k^{h_k} with 0^0 = 1.
inline Rat multi_pow(const MultiIndex& x, const MultiIndex& h) {
  Rat p = 1;
  for (std::size_t k = 0; k < x.size(); ++k) p *= rat_pow(Rat(x[k]), h[k]);
  return p;
}

struct MultiIndexStencil {
  int dim = 1;
  std::vector<MultiIndex> shifts;
  std::vector<Rat> gains;
  std::vector<Rat> dx;  // per-axis spacing

  MultiIndexStencil(int n, std::vector<MultiIndex> s, std::vector<Rat> g, std::vector<Rat> d)
      : dim(n), shifts(std::move(s)), gains(std::move(g)), dx(std::move(d)) {
    if (dim < 1) throw validity_error("dimension must be >= 1");
    if (shifts.empty() || shifts.size() != gains.size())
      throw validity_error("shifts/gains must be nonempty and aligned");
    if (dx.size() != static_cast<std::size_t>(dim))
      throw validity_error("dx must carry one entry per axis");
    for (const Rat& v : dx)
      if (v <= 0) throw validity_error("dx entries must be positive");
    for (const auto& s0 : shifts)
      if (s0.size() != static_cast<std::size_t>(dim))
        throw validity_error("shift dimension mismatch");
    for (std::size_t a = 0; a < shifts.size(); ++a)
      for (std::size_t b = a + 1; b < shifts.size(); ++b)
        if (shifts[a] == shifts[b]) throw validity_error("shifts must be distinct");
  }
};

struct MultiPdeCoefficients {
  int dim = 1;
  int order = 0;
  std::map<MultiIndex, Rat> coeffs;  // keyed by h, |h| <= order
  std::vector<Rat> dx;

  const Rat& at(const MultiIndex& h) const {
    static const Rat zero = 0;
    auto it = coeffs.find(h);
    return it == coeffs.end() ? zero : it->second;
  }
};

namespace detail {

inline void enumerate_multi_indices(int dim, int degree_left, MultiIndex& current,
                                    std::vector<MultiIndex>& out) {
  if (current.size() == static_cast<std::size_t>(dim)) {
    out.push_back(current);
    return;
  }
  for (int v = 0; v <= degree_left; ++v) {
    current.push_back(v);
    enumerate_multi_indices(dim, degree_left - v, current, out);
    current.pop_back();
  }
}

}  // namespace detail

// All nonnegative multi-indices with |h| <= d, lexicographic order.
inline std::vector<MultiIndex> multi_indices_up_to(int dim, int d) {
  std::vector<MultiIndex> out;
  MultiIndex current;
  detail::enumerate_multi_indices(dim, d, current, out);
  return out;
}

// c_h = sum_j a_j s_j^h for every |h| <= d, exact rationals.
inline MultiPdeCoefficients continue_multidim(const MultiIndexStencil& st, int d) {
  if (d < 0) throw std::invalid_argument("continue_multidim: order must be >= 0");
  MultiPdeCoefficients pde;
  pde.dim = st.dim;
  pde.order = d;
  pde.dx = st.dx;
  for (const MultiIndex& h : multi_indices_up_to(st.dim, d)) {
    Rat acc = 0;
    for (std::size_t j = 0; j < st.shifts.size(); ++j)
      acc += st.gains[j] * multi_pow(st.shifts[j], h);
    pde.coeffs.emplace(h, std::move(acc));
  }
  return pde;
}

}  // namespace continuum
