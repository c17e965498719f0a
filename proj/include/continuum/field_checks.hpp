#pragma once

// Numerical residuals for the Jacobian identities used by the Euler
// derivation: the index-derivative product identity, the determinant
// transport lemma, and the isotropic-divergence lemma. Each evaluator builds
// the fields on a grid, forms both sides with central differences, and
// returns the maximum residual; refining the grid must shrink it at O(h^2).

#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "continuum/linalg3.hpp"
#include "continuum/particles.hpp"
#include "continuum/rational.hpp"

namespace continuum {

// Scalar fields sampled on an n-dimensional grid over [0, 2*pi)^n (periodic)
// or [0, 2*pi]^n (bounded, residuals taken on the interior only).
class FieldGrid {
 public:
  FieldGrid(int dim, int points, bool periodic)
      : dim_(dim), points_(points), periodic_(periodic) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("FieldGrid: dim must be 1..3");
    if (points < 8) throw std::invalid_argument("FieldGrid: need at least 8 points");
    size_ = 1;
    for (int a = 0; a < dim; ++a) size_ *= points_;
    h_ = periodic_ ? 2.0 * M_PI / points_ : 2.0 * M_PI / (points_ - 1);
  }

  int dim() const { return dim_; }
  int points() const { return points_; }
  std::int64_t size() const { return size_; }
  double h() const { return h_; }
  bool periodic() const { return periodic_; }

  std::array<std::int64_t, 3> unflatten(std::int64_t f) const {
    std::array<std::int64_t, 3> idx{0, 0, 0};
    for (int a = 0; a < dim_; ++a) {
      idx[static_cast<std::size_t>(a)] = f % points_;
      f /= points_;
    }
    return idx;
  }

  std::int64_t flatten(std::array<std::int64_t, 3> idx) const {
    std::int64_t f = 0;
    for (int a = dim_ - 1; a >= 0; --a) {
      std::int64_t v = idx[static_cast<std::size_t>(a)];
      if (periodic_) v = ((v % points_) + points_) % points_;
      f = f * points_ + v;
    }
    return f;
  }

  Vec3 coordinates(std::int64_t f) const {
    const auto idx = unflatten(f);
    Vec3 x{0, 0, 0};
    for (int a = 0; a < dim_; ++a)
      x[static_cast<std::size_t>(a)] = h_ * static_cast<double>(idx[static_cast<std::size_t>(a)]);
    return x;
  }

  // Central difference along an axis. On bounded grids the edge values are
  // one-sided and should be excluded via interior().
  std::vector<double> ddx(const std::vector<double>& field, int axis) const {
    std::vector<double> out(field.size());
    for (std::int64_t f = 0; f < size_; ++f) {
      auto idx = unflatten(f);
      auto up = idx, down = idx;
      up[static_cast<std::size_t>(axis)] += 1;
      down[static_cast<std::size_t>(axis)] -= 1;
      if (!periodic_) {
        const std::int64_t i = idx[static_cast<std::size_t>(axis)];
        if (i == 0 || i == points_ - 1) {
          out[static_cast<std::size_t>(f)] = 0.0;  // masked by interior()
          continue;
        }
      }
      out[static_cast<std::size_t>(f)] =
          (field[static_cast<std::size_t>(flatten(up))] -
           field[static_cast<std::size_t>(flatten(down))]) /
          (2.0 * h_);
    }
    return out;
  }

  // True when the point is far enough from every bounded edge for `margin`
  // chained central differences to be valid.
  bool interior(std::int64_t f, int margin) const {
    if (periodic_) return true;
    const auto idx = unflatten(f);
    for (int a = 0; a < dim_; ++a) {
      const std::int64_t i = idx[static_cast<std::size_t>(a)];
      if (i < margin || i >= points_ - margin) return false;
    }
    return true;
  }

 private:
  int dim_;
  int points_;
  bool periodic_;
  std::int64_t size_;
  double h_;
};

namespace detail {

// Gradient with respect to x of a scalar field given on an M-grid, using the
// chain rule through A = dx/dM: grad_x = A^{-T} grad_M.
inline std::vector<Vec3> grad_x_via_chain(const FieldGrid& grid,
                                          const std::vector<double>& field,
                                          const std::vector<Mat3>& a_inv) {
  std::vector<std::vector<double>> dm(static_cast<std::size_t>(grid.dim()));
  for (int axis = 0; axis < grid.dim(); ++axis)
    dm[static_cast<std::size_t>(axis)] = grid.ddx(field, axis);
  std::vector<Vec3> out(static_cast<std::size_t>(grid.size()));
  for (std::int64_t f = 0; f < grid.size(); ++f) {
    Vec3 gm{0, 0, 0};
    for (int axis = 0; axis < grid.dim(); ++axis)
      gm[static_cast<std::size_t>(axis)] = dm[static_cast<std::size_t>(axis)][static_cast<std::size_t>(f)];
    // A^{-T} grad_M = (grad_M^T A^{-1})^T
    out[static_cast<std::size_t>(f)] = matvec_t(a_inv[static_cast<std::size_t>(f)], gm, grid.dim());
  }
  return out;
}

}  // namespace detail

// Residual of the product identity
//   [d/dM (phi (dx/dM) q) q]^T
//     = div_x( phi (dx/dM) q q^T (dx/dM)^T )
//       - phi ( div_x(dx/dM) q q^T (dx/dM)^T ).
// x(M) = M + xmap_pert(M) with a periodic perturbation; phi is a scalar
// field of x. Everything is sampled on a periodic M-grid.
inline double prop1_residual(int dim, int points,
                             const std::function<Vec3(const Vec3&)>& xmap_pert,
                             const std::function<double(const Vec3&)>& phi_of_x,
                             const std::array<std::int64_t, 3>& q_index) {
  const FieldGrid grid(dim, points, true);
  const std::int64_t size = grid.size();
  const int n = dim;
  Vec3 q{0, 0, 0};
  for (int a = 0; a < n; ++a) q[static_cast<std::size_t>(a)] = static_cast<double>(q_index[static_cast<std::size_t>(a)]);

  // Sample the periodic perturbation components and phi.
  std::vector<std::vector<double>> pert_comp(static_cast<std::size_t>(n),
                                             std::vector<double>(static_cast<std::size_t>(size)));
  std::vector<double> phi(static_cast<std::size_t>(size));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 m = grid.coordinates(f);
    const Vec3 pert = xmap_pert(m);
    const Vec3 x = m + pert;
    for (int c = 0; c < n; ++c)
      pert_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] = pert[static_cast<std::size_t>(c)];
    phi[static_cast<std::size_t>(f)] = phi_of_x(x);
  }

  // A = dx/dM = I + d(pert)/dM; only the periodic part is differenced, the
  // identity ramp is exact.
  std::vector<Mat3> a_mat(static_cast<std::size_t>(size)), a_inv(static_cast<std::size_t>(size));
  {
    std::vector<std::vector<std::vector<double>>> da(static_cast<std::size_t>(n));
    for (int c = 0; c < n; ++c) {
      da[static_cast<std::size_t>(c)].resize(static_cast<std::size_t>(n));
      for (int axis = 0; axis < n; ++axis)
        da[static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)] =
            grid.ddx(pert_comp[static_cast<std::size_t>(c)], axis);
    }
    for (std::int64_t f = 0; f < size; ++f) {
      Mat3 a = mat3_zero();
      for (int c = 0; c < n; ++c)
        for (int axis = 0; axis < n; ++axis)
          a[static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)] =
              da[static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)][static_cast<std::size_t>(f)] +
              (c == axis ? 1.0 : 0.0);
      a_mat[static_cast<std::size_t>(f)] = a;
      a_inv[static_cast<std::size_t>(f)] = inverse(a, n);
    }
  }

  // w = phi * A q, LHS = (dw/dM) q.
  std::vector<std::vector<double>> w_comp(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(size)));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 aq = matvec(a_mat[static_cast<std::size_t>(f)], q, n);
    for (int c = 0; c < n; ++c)
      w_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] =
          phi[static_cast<std::size_t>(f)] * aq[static_cast<std::size_t>(c)];
  }
  std::vector<Vec3> lhs(static_cast<std::size_t>(size), Vec3{0, 0, 0});
  for (int c = 0; c < n; ++c) {
    for (int axis = 0; axis < n; ++axis) {
      const auto d = grid.ddx(w_comp[static_cast<std::size_t>(c)], axis);
      for (std::int64_t f = 0; f < size; ++f)
        lhs[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)] +=
            d[static_cast<std::size_t>(f)] * q[static_cast<std::size_t>(axis)];
    }
  }

  // T = phi (A q)(A q)^T and S = q q^T A^T (for the second term).
  std::vector<std::vector<double>> t_comp(static_cast<std::size_t>(n * n),
                                          std::vector<double>(static_cast<std::size_t>(size)));
  std::vector<std::vector<double>> a_entry(static_cast<std::size_t>(n * n),
                                           std::vector<double>(static_cast<std::size_t>(size)));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 aq = matvec(a_mat[static_cast<std::size_t>(f)], q, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        t_comp[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(f)] =
            phi[static_cast<std::size_t>(f)] * aq[static_cast<std::size_t>(i)] * aq[static_cast<std::size_t>(j)];
        a_entry[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(f)] =
            a_mat[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      }
  }
  // x-gradients of every T and A entry via the chain rule.
  std::vector<std::vector<Vec3>> grad_t(static_cast<std::size_t>(n * n)),
      grad_a(static_cast<std::size_t>(n * n));
  for (int e = 0; e < n * n; ++e) {
    grad_t[static_cast<std::size_t>(e)] =
        detail::grad_x_via_chain(grid, t_comp[static_cast<std::size_t>(e)], a_inv);
    grad_a[static_cast<std::size_t>(e)] =
        detail::grad_x_via_chain(grid, a_entry[static_cast<std::size_t>(e)], a_inv);
  }

  double residual = 0.0;
  for (std::int64_t f = 0; f < size; ++f) {
    // div_x T (row vector over columns j).
    Vec3 div_t{0, 0, 0};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        div_t[static_cast<std::size_t>(j)] +=
            grad_t[static_cast<std::size_t>(k * n + j)][static_cast<std::size_t>(f)][static_cast<std::size_t>(k)];
    // div_x A (row vector).
    Vec3 div_a{0, 0, 0};
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        div_a[static_cast<std::size_t>(j)] +=
            grad_a[static_cast<std::size_t>(k * n + j)][static_cast<std::size_t>(f)][static_cast<std::size_t>(k)];
    // second term: phi * (div_a) q q^T A^T, a row vector.
    const Mat3& a = a_mat[static_cast<std::size_t>(f)];
    const double dq = dot(div_a, q);
    const Vec3 aq = matvec(a, q, n);
    Vec3 rhs{0, 0, 0};
    for (int j = 0; j < n; ++j)
      rhs[static_cast<std::size_t>(j)] = div_t[static_cast<std::size_t>(j)] -
                                         phi[static_cast<std::size_t>(f)] * dq * aq[static_cast<std::size_t>(j)];
    for (int j = 0; j < n; ++j)
      residual = std::max(residual, std::abs(lhs[static_cast<std::size_t>(f)][static_cast<std::size_t>(j)] -
                                             rhs[static_cast<std::size_t>(j)]));
  }
  return residual;
}

// Residual of the determinant transport lemma: J evolving one explicit time
// step of dJ/dt = -d(Ju)/dx must move det J by -div(det J * u) + O(dt) +
// O(h^2). M(x) = x + mmap_pert(x), u periodic.
inline double lemma1_residual(int dim, int points,
                              const std::function<Vec3(const Vec3&)>& mmap_pert,
                              const std::function<Vec3(const Vec3&)>& u_field, double dt) {
  const FieldGrid grid(dim, points, true);
  const std::int64_t size = grid.size();
  const int n = dim;

  std::vector<std::vector<double>> m_comp(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(size)));
  std::vector<Vec3> u(static_cast<std::size_t>(size));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 x = grid.coordinates(f);
    const Vec3 pert = mmap_pert(x);
    for (int c = 0; c < n; ++c)
      m_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] =
          x[static_cast<std::size_t>(c)] + pert[static_cast<std::size_t>(c)];
    u[static_cast<std::size_t>(f)] = u_field(x);
  }

  // J_ik = dM_i/dx_k; linear part handled exactly by the central difference
  // of the periodic perturbation plus identity.
  std::vector<Mat3> jac(static_cast<std::size_t>(size), mat3_zero());
  for (int c = 0; c < n; ++c) {
    // Differentiate the periodic perturbation and add the identity row.
    std::vector<double> pert_c(static_cast<std::size_t>(size));
    for (std::int64_t f = 0; f < size; ++f) {
      const Vec3 x = grid.coordinates(f);
      pert_c[static_cast<std::size_t>(f)] =
          m_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] - x[static_cast<std::size_t>(c)];
    }
    for (int axis = 0; axis < n; ++axis) {
      const auto d = grid.ddx(pert_c, axis);
      for (std::int64_t f = 0; f < size; ++f)
        jac[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)] =
            d[static_cast<std::size_t>(f)] + (c == axis ? 1.0 : 0.0);
    }
  }

  // w = J u per point, and its x-Jacobian by finite differences.
  std::vector<std::vector<double>> w_comp(static_cast<std::size_t>(n),
                                          std::vector<double>(static_cast<std::size_t>(size)));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 w = matvec(jac[static_cast<std::size_t>(f)], u[static_cast<std::size_t>(f)], n);
    for (int c = 0; c < n; ++c)
      w_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] = w[static_cast<std::size_t>(c)];
  }
  std::vector<Mat3> dw(static_cast<std::size_t>(size), mat3_zero());
  for (int c = 0; c < n; ++c)
    for (int axis = 0; axis < n; ++axis) {
      const auto d = grid.ddx(w_comp[static_cast<std::size_t>(c)], axis);
      for (std::int64_t f = 0; f < size; ++f)
        dw[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)] =
            d[static_cast<std::size_t>(f)];
    }

  // det J before and after the step, and div(det J * u).
  std::vector<double> det_before(static_cast<std::size_t>(size)),
      det_after(static_cast<std::size_t>(size));
  std::vector<std::vector<double>> flux(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(size)));
  for (std::int64_t f = 0; f < size; ++f) {
    det_before[static_cast<std::size_t>(f)] = det(jac[static_cast<std::size_t>(f)], n);
    Mat3 jp = jac[static_cast<std::size_t>(f)];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        jp[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] -=
            dt * dw[static_cast<std::size_t>(f)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    det_after[static_cast<std::size_t>(f)] = det(jp, n);
    for (int c = 0; c < n; ++c)
      flux[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] =
          det_before[static_cast<std::size_t>(f)] * u[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)];
  }
  std::vector<double> div_flux(static_cast<std::size_t>(size), 0.0);
  for (int c = 0; c < n; ++c) {
    const auto d = grid.ddx(flux[static_cast<std::size_t>(c)], c);
    for (std::int64_t f = 0; f < size; ++f)
      div_flux[static_cast<std::size_t>(f)] += d[static_cast<std::size_t>(f)];
  }

  double residual = 0.0;
  for (std::int64_t f = 0; f < size; ++f)
    residual = std::max(residual,
                        std::abs((det_after[static_cast<std::size_t>(f)] -
                                  det_before[static_cast<std::size_t>(f)]) /
                                     dt +
                                 div_flux[static_cast<std::size_t>(f)]));
  return residual;
}

// Residual of div(rho * dx/dM) (dx/dM)^T = 0 for an isotropic dx/dM.
// The index map M(x) = x + mmap_pert(x) must be isotropic (conformal in 2D,
// any monotone map in 1D); rho = det(dM/dx). Bounded grid; the residual is
// taken over interior points to keep every chained difference central.
inline double lemma2_residual(int dim, int points,
                              const std::function<Vec3(const Vec3&)>& mmap_pert) {
  const FieldGrid grid(dim, points, false);
  const std::int64_t size = grid.size();
  const int n = dim;

  std::vector<std::vector<double>> pert_comp(static_cast<std::size_t>(n),
                                             std::vector<double>(static_cast<std::size_t>(size)));
  for (std::int64_t f = 0; f < size; ++f) {
    const Vec3 x = grid.coordinates(f);
    const Vec3 pert = mmap_pert(x);
    for (int c = 0; c < n; ++c)
      pert_comp[static_cast<std::size_t>(c)][static_cast<std::size_t>(f)] = pert[static_cast<std::size_t>(c)];
  }

  std::vector<Mat3> jac(static_cast<std::size_t>(size), mat3_zero());
  for (int c = 0; c < n; ++c)
    for (int axis = 0; axis < n; ++axis) {
      const auto d = grid.ddx(pert_comp[static_cast<std::size_t>(c)], axis);
      for (std::int64_t f = 0; f < size; ++f)
        jac[static_cast<std::size_t>(f)][static_cast<std::size_t>(c)][static_cast<std::size_t>(axis)] =
            d[static_cast<std::size_t>(f)] + (c == axis ? 1.0 : 0.0);
    }

  // rho * B with B = J^{-1} = dx/dM, then the divergence row and B^T.
  std::vector<std::vector<double>> rho_b(static_cast<std::size_t>(n * n),
                                         std::vector<double>(static_cast<std::size_t>(size)));
  std::vector<Mat3> b_mat(static_cast<std::size_t>(size));
  for (std::int64_t f = 0; f < size; ++f) {
    const double rho = det(jac[static_cast<std::size_t>(f)], n);
    const Mat3 b = inverse(jac[static_cast<std::size_t>(f)], n);
    b_mat[static_cast<std::size_t>(f)] = b;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        rho_b[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(f)] =
            rho * b[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  std::vector<std::vector<double>> d_rho_b(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d_rho_b[static_cast<std::size_t>(i * n + j)] =
          grid.ddx(rho_b[static_cast<std::size_t>(i * n + j)], i);

  double residual = 0.0;
  for (std::int64_t f = 0; f < size; ++f) {
    if (!grid.interior(f, 2)) continue;
    Vec3 div_row{0, 0, 0};
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i)
        div_row[static_cast<std::size_t>(j)] +=
            d_rho_b[static_cast<std::size_t>(i * n + j)][static_cast<std::size_t>(f)];
    const Mat3& b = b_mat[static_cast<std::size_t>(f)];
    for (int j = 0; j < n; ++j) {
      double value = 0.0;
      for (int m = 0; m < n; ++m)
        value += div_row[static_cast<std::size_t>(m)] * b[static_cast<std::size_t>(j)][static_cast<std::size_t>(m)];
      residual = std::max(residual, std::abs(value));
    }
  }
  return residual;
}

}  // namespace continuum
