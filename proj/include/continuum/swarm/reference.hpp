#pragma once

// Desired system: a cloud of first-order reference agents following an
// analytic velocity field. The desired density and its gradient live on the
// reference agents (each agent's det G with the same ghost rules) and are
// interpolated at query points; outside the reference hull the desired
// density is zero.

#include <cmath>
#include <functional>
#include <limits>

#include "continuum/swarm/lattice.hpp"
#include "continuum/swarm/metric.hpp"

namespace continuum::swarm {

struct VelocityField {
  std::function<Vec3(const Vec3&)> u;
  std::function<double(const Vec3&)> div_u;

  static VelocityField zero() {
    return {[](const Vec3&) { return Vec3{0, 0, 0}; }, [](const Vec3&) { return 0.0; }};
  }
};

// The window-passage field: unit flow along x, transverse components pull
// toward the axis ahead of the window at x0 and release after it:
//   u_y = A atan(x - x0) exp(-(x-x0)^2 / W) * y   (same for z).
struct WindowField {
  double x0 = 20.0;
  double amplitude = 0.05;
  double width = 100.0;
  int dim = 3;

  Vec3 u(const Vec3& x) const {
    const double s = x[0] - x0;
    const double envelope = amplitude * std::atan(s) * std::exp(-s * s / width);
    Vec3 out{1.0, 0.0, 0.0};
    for (int a = 1; a < dim; ++a)
      out[static_cast<std::size_t>(a)] = envelope * x[static_cast<std::size_t>(a)];
    return out;
  }

  double div_u(const Vec3& x) const {
    const double s = x[0] - x0;
    const double envelope = amplitude * std::atan(s) * std::exp(-s * s / width);
    return envelope * static_cast<double>(dim - 1);
  }

  VelocityField field() const {
    return {[*this](const Vec3& x) { return u(x); },
            [*this](const Vec3& x) { return div_u(x); }};
  }
};

inline VelocityField desired_field_window(double x0, double amplitude = 0.05,
                                          double width = 100.0, int dim = 3) {
  WindowField w;
  w.x0 = x0;
  w.amplitude = amplitude;
  w.width = width;
  w.dim = dim;
  return w.field();
}

struct ReferenceSample {
  double rho_d = 0.0;
  Vec3 grad_rho_d{0, 0, 0};
  Vec3 u_d{0, 0, 0};
  double div_u_d = 0.0;
};

class ReferenceCloud {
 public:
  ReferenceCloud(SwarmState initial, VelocityField field)
      : state_(std::move(initial)), field_(std::move(field)) {
    rebuild();
  }

  const SwarmState& state() const { return state_; }
  const DensityCloud& density() const { return density_; }

  // First-order integrator step along the velocity field.
  void step(double dt) {
    for (std::size_t i = 0; i < state_.pos.size(); ++i)
      state_.pos[i] = state_.pos[i] + dt * field_.u(state_.pos[i]);
    state_.t += dt;
    rebuild();
  }

  // Recomputes per-agent densities and gradients from current positions.
  void rebuild() { density_ = build_density_cloud(state_); }

  // Desired density, its gradient, and the velocity field at a point.
  // Density queries locate the lattice cell containing x; points outside the
  // hull read zero density and gradient.
  ReferenceSample sample(const Vec3& x) const {
    ReferenceSample out;
    out.u_d = field_.u(x);
    out.div_u_d = field_.div_u(x);

    // Nearest agent first.
    const std::int64_t n = state_.count();
    std::int64_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::int64_t f = 0; f < n; ++f) {
      const Vec3 d = x - state_.pos[static_cast<std::size_t>(f)];
      const double d2 = dot(d, d);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = f;
      }
    }
    // Exactly on an agent: nodal values, no interpolation error.
    if (best_d2 < 1e-24) {
      out.rho_d = density_.rho[static_cast<std::size_t>(best)];
      out.grad_rho_d = density_.grad_rho[static_cast<std::size_t>(best)];
      return out;
    }

    // Search the cells around the nearest agent (corner offsets in
    // [-2, 0]^dim cover warped lattices).
    const Index3 anchor = state_.unflatten(best);
    const int dim = state_.dim;
    const int span = 3;
    std::int64_t combos = 1;
    for (int a = 0; a < dim; ++a) combos *= span;
    for (std::int64_t c = 0; c < combos; ++c) {
      Index3 corner = anchor;
      std::int64_t rem = c;
      bool valid = true;
      for (int a = 0; a < dim; ++a) {
        corner[static_cast<std::size_t>(a)] += (rem % span) - (span - 1);
        rem /= span;
        if (corner[static_cast<std::size_t>(a)] < 0 ||
            corner[static_cast<std::size_t>(a)] + 1 >= state_.extent[static_cast<std::size_t>(a)])
          valid = false;
      }
      if (!valid) continue;
      const detail::CellGeometry cell = detail::cell_geometry(density_, corner);
      Vec3 xi;
      if (!cell.locate(x, xi)) continue;
      out.rho_d = cell.interpolate(xi);
      // Interpolate the per-corner gradient with the same weights.
      Vec3 grad{0, 0, 0};
      for (int cc = 0; cc < cell.corners; ++cc) {
        Index3 idx = corner;
        for (int a = 0; a < dim; ++a) idx[static_cast<std::size_t>(a)] += (cc >> a) & 1;
        const double w = detail::corner_weight(cc, xi, dim);
        grad = grad + w * density_.grad_rho[static_cast<std::size_t>(state_.flatten(idx))];
      }
      out.grad_rho_d = grad;
      return out;
    }
    // Outside the hull: rho_d = 0, grad 0 (boundary condition).
    return out;
  }

 private:
  SwarmState state_;
  DensityCloud density_;
  VelocityField field_;
};

}  // namespace continuum::swarm
