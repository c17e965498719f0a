#pragma once

// Density reconstruction on a metric grid. Each lattice cell of a cloud is a
// (possibly deformed) hexahedron in space; grid points inside it take the
// multilinear interpolation of the corner agents' densities, points in no
// cell take zero (the density vanishes outside the formation hull). The L2
// deviation between two clouds integrates the squared difference over an
// axis-aligned box bounding both.

#include <cmath>
#include <limits>
#include <vector>

#include "continuum/linalg3.hpp"
#include "continuum/swarm/lattice.hpp"
#include "continuum/swarm/tensors.hpp"

namespace continuum::swarm {

// A cloud with per-agent density samples (rho_i = 1 / det G_i).
struct DensityCloud {
  const SwarmState* state = nullptr;
  std::vector<double> rho;        // per agent
  std::vector<Vec3> grad_rho;     // per agent, d(rho)/dx (discrete formula)
};

// Per-agent density and gradient via the local tensors:
//   rho = 1/det G,   grad rho = -rho^2 * G^{-T} (d det G / dM)^T.
// Near-singular cells keep a clamped density so the metric stays finite.
inline DensityCloud build_density_cloud(const SwarmState& s, double singular_floor = 1e-12) {
  DensityCloud cloud;
  cloud.state = &s;
  const std::int64_t n = s.count();
  cloud.rho.resize(static_cast<std::size_t>(n));
  cloud.grad_rho.resize(static_cast<std::size_t>(n));
  for (std::int64_t f = 0; f < n; ++f) {
    const LocalTensors t = local_tensors(s, s.unflatten(f));
    double d = t.det_g;
    if (std::abs(d) < singular_floor) d = d < 0 ? -singular_floor : singular_floor;
    const double rho = 1.0 / d;
    cloud.rho[static_cast<std::size_t>(f)] = rho;
    Mat3 g = t.g;
    Vec3 grad{0, 0, 0};
    if (std::abs(t.det_g) >= singular_floor) {
      const Mat3 ginv = inverse(g, s.dim);
      // grad rho = -rho^2 * (grad_M det G) G^{-1}, as a row vector.
      const Vec3 row = matvec_t(ginv, t.grad_det_g, s.dim);
      grad = (-rho * rho) * row;
    }
    cloud.grad_rho[static_cast<std::size_t>(f)] = grad;
  }
  return cloud;
}

namespace detail {

// Multilinear interpolation weights on [0,1]^n.
inline double corner_weight(int corner_bits, const Vec3& xi, int dim) {
  double w = 1.0;
  for (int a = 0; a < dim; ++a) {
    const double t = xi[static_cast<std::size_t>(a)];
    w *= (corner_bits >> a) & 1 ? t : 1.0 - t;
  }
  return w;
}

struct CellGeometry {
  int dim = 3;
  int corners = 8;
  std::array<Vec3, 8> x{};       // corner positions
  std::array<double, 8> value{}; // corner scalars

  Vec3 map(const Vec3& xi) const {
    Vec3 out{0, 0, 0};
    for (int c = 0; c < corners; ++c) out = out + corner_weight(c, xi, dim) * x[static_cast<std::size_t>(c)];
    return out;
  }

  double interpolate(const Vec3& xi) const {
    double out = 0.0;
    for (int c = 0; c < corners; ++c) out += corner_weight(c, xi, dim) * value[static_cast<std::size_t>(c)];
    return out;
  }

  Mat3 jacobian(const Vec3& xi) const {
    Mat3 j = mat3_zero();
    for (int c = 0; c < corners; ++c) {
      for (int a = 0; a < dim; ++a) {
        double w = 1.0;
        for (int b = 0; b < dim; ++b) {
          if (b == a) {
            w *= (c >> b) & 1 ? 1.0 : -1.0;
          } else {
            const double t = xi[static_cast<std::size_t>(b)];
            w *= (c >> b) & 1 ? t : 1.0 - t;
          }
        }
        for (int r = 0; r < dim; ++r)
          j[static_cast<std::size_t>(r)][static_cast<std::size_t>(a)] +=
              w * x[static_cast<std::size_t>(c)][static_cast<std::size_t>(r)];
      }
    }
    return j;
  }

  // Newton inversion of the multilinear map; returns natural coordinates in
  // [0,1]^n when the point lies inside, nullopt-like flag otherwise.
  bool locate(const Vec3& target, Vec3& xi_out, double tol = 1e-10) const {
    Vec3 xi{0.5, 0.5, 0.5};
    for (int it = 0; it < 30; ++it) {
      const Vec3 r = map(xi) - target;
      double rn = 0.0;
      for (int a = 0; a < dim; ++a) rn = std::max(rn, std::abs(r[static_cast<std::size_t>(a)]));
      if (rn < tol) break;
      Mat3 j = jacobian(xi);
      const double d = det(j, dim);
      if (std::abs(d) < 1e-300) return false;
      const Vec3 step = matvec(inverse(j, dim), r, dim);
      for (int a = 0; a < dim; ++a) xi[static_cast<std::size_t>(a)] -= step[static_cast<std::size_t>(a)];
      for (int a = 0; a < dim; ++a) {
        if (xi[static_cast<std::size_t>(a)] < -2.0 || xi[static_cast<std::size_t>(a)] > 3.0) return false;
      }
    }
    const double slack = 1e-9;
    for (int a = 0; a < dim; ++a)
      if (xi[static_cast<std::size_t>(a)] < -slack || xi[static_cast<std::size_t>(a)] > 1.0 + slack)
        return false;
    xi_out = xi;
    return true;
  }
};

inline CellGeometry cell_geometry(const DensityCloud& cloud, const Index3& corner) {
  const SwarmState& s = *cloud.state;
  CellGeometry cell;
  cell.dim = s.dim;
  cell.corners = 1 << s.dim;
  for (int c = 0; c < cell.corners; ++c) {
    Index3 idx = corner;
    for (int a = 0; a < s.dim; ++a)
      idx[static_cast<std::size_t>(a)] += (c >> a) & 1;
    const std::int64_t f = s.flatten(idx);
    cell.x[static_cast<std::size_t>(c)] = s.pos[static_cast<std::size_t>(f)];
    cell.value[static_cast<std::size_t>(c)] = cloud.rho[static_cast<std::size_t>(f)];
  }
  return cell;
}

}  // namespace detail

struct MetricGrid {
  int dim = 3;
  int points = 32;  // per axis
  Vec3 lo{0, 0, 0};
  Vec3 hi{0, 0, 0};

  Vec3 step() const {
    Vec3 h{0, 0, 0};
    for (int a = 0; a < dim; ++a)
      h[static_cast<std::size_t>(a)] = (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) /
                                       static_cast<double>(points - 1);
    return h;
  }

  std::int64_t size() const {
    std::int64_t n = 1;
    for (int a = 0; a < dim; ++a) n *= points;
    return n;
  }
};

// Axis-aligned box bounding both clouds, padded a hair so hull faces fall
// inside.
inline MetricGrid bounding_grid(const SwarmState& a, const SwarmState& b, int points = 32) {
  MetricGrid grid;
  grid.dim = a.dim;
  grid.points = points;
  for (int axis = 0; axis < a.dim; ++axis) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const Vec3& x : a.pos) {
      lo = std::min(lo, x[static_cast<std::size_t>(axis)]);
      hi = std::max(hi, x[static_cast<std::size_t>(axis)]);
    }
    for (const Vec3& x : b.pos) {
      lo = std::min(lo, x[static_cast<std::size_t>(axis)]);
      hi = std::max(hi, x[static_cast<std::size_t>(axis)]);
    }
    const double pad = 1e-9 * std::max(1.0, hi - lo);
    grid.lo[static_cast<std::size_t>(axis)] = lo - pad;
    grid.hi[static_cast<std::size_t>(axis)] = hi + pad;
  }
  return grid;
}

// Rasterises the cloud's density onto the metric grid: cell-by-cell Newton
// location of the grid points inside each hexahedron, zero elsewhere.
inline std::vector<double> rasterize_density(const DensityCloud& cloud, const MetricGrid& grid) {
  const SwarmState& s = *cloud.state;
  std::vector<double> field(static_cast<std::size_t>(grid.size()), 0.0);
  const Vec3 h = grid.step();

  Index3 cells{1, 1, 1};
  for (int a = 0; a < s.dim; ++a)
    cells[static_cast<std::size_t>(a)] = s.extent[static_cast<std::size_t>(a)] - 1;
  std::int64_t cell_count = 1;
  for (int a = 0; a < s.dim; ++a) cell_count *= cells[static_cast<std::size_t>(a)];

  for (std::int64_t cf = 0; cf < cell_count; ++cf) {
    Index3 corner{0, 0, 0};
    std::int64_t rem = cf;
    for (int a = 0; a < s.dim; ++a) {
      corner[static_cast<std::size_t>(a)] = rem % cells[static_cast<std::size_t>(a)];
      rem /= cells[static_cast<std::size_t>(a)];
    }
    const detail::CellGeometry cell = detail::cell_geometry(cloud, corner);
    // Integer ranges of grid points inside the cell's bounding box.
    std::array<std::int64_t, 3> i_lo{0, 0, 0}, i_hi{0, 0, 0};
    bool empty = false;
    for (int a = 0; a < s.dim; ++a) {
      double blo = std::numeric_limits<double>::infinity();
      double bhi = -std::numeric_limits<double>::infinity();
      for (int c = 0; c < cell.corners; ++c) {
        blo = std::min(blo, cell.x[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]);
        bhi = std::max(bhi, cell.x[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)]);
      }
      const double g0 = grid.lo[static_cast<std::size_t>(a)];
      const double ha = h[static_cast<std::size_t>(a)];
      i_lo[static_cast<std::size_t>(a)] =
          std::max<std::int64_t>(0, static_cast<std::int64_t>(std::ceil((blo - g0) / ha - 1e-12)));
      i_hi[static_cast<std::size_t>(a)] = std::min<std::int64_t>(
          grid.points - 1, static_cast<std::int64_t>(std::floor((bhi - g0) / ha + 1e-12)));
      if (i_lo[static_cast<std::size_t>(a)] > i_hi[static_cast<std::size_t>(a)]) empty = true;
    }
    if (empty) continue;

    Index3 gi = i_lo;
    while (true) {
      Vec3 x{0, 0, 0};
      for (int a = 0; a < s.dim; ++a)
        x[static_cast<std::size_t>(a)] = grid.lo[static_cast<std::size_t>(a)] +
                                         h[static_cast<std::size_t>(a)] *
                                             static_cast<double>(gi[static_cast<std::size_t>(a)]);
      Vec3 xi;
      if (cell.locate(x, xi)) {
        std::int64_t flat = 0;
        for (int a = s.dim - 1; a >= 0; --a)
          flat = flat * grid.points + gi[static_cast<std::size_t>(a)];
        field[static_cast<std::size_t>(flat)] = cell.interpolate(xi);
      }
      int axis = 0;
      while (axis < s.dim) {
        if (++gi[static_cast<std::size_t>(axis)] <= i_hi[static_cast<std::size_t>(axis)]) break;
        gi[static_cast<std::size_t>(axis)] = i_lo[static_cast<std::size_t>(axis)];
        ++axis;
      }
      if (axis == s.dim) break;
    }
  }
  return field;
}

// Grid-weighted L2 norm of the density difference over the bounding box.
inline double density_deviation(const DensityCloud& real_cloud, const DensityCloud& ref_cloud,
                                int points = 32) {
  const MetricGrid grid = bounding_grid(*real_cloud.state, *ref_cloud.state, points);
  const auto fa = rasterize_density(real_cloud, grid);
  const auto fb = rasterize_density(ref_cloud, grid);
  const Vec3 h = grid.step();
  double volume_element = 1.0;
  for (int a = 0; a < grid.dim; ++a) volume_element *= h[static_cast<std::size_t>(a)];
  double acc = 0.0;
  for (std::size_t i = 0; i < fa.size(); ++i) {
    const double d = fa[i] - fb[i];
    acc += d * d;
  }
  return std::sqrt(acc * volume_element);
}

}  // namespace continuum::swarm
