#pragma once

// Drone lattice state and the ghost-agent boundary rules. Agents sit on a
// rectangular multi-index lattice; a missing neighbour is synthesised from
// the two nearest real agents on that axis:
//   position: x_ghost = 3 x_i - 2 x_inward   (density ramps linearly to 0)
//   velocity: v_ghost = 2 v_i - v_inward     (linear extrapolation)
// Diagonal ghosts wanted by the mixed second differences compose the
// per-axis rules in axis order.

#include <array>
#include <cstdint>
#include <vector>

#include "continuum/linalg3.hpp"
#include "continuum/particles.hpp"
#include "continuum/rational.hpp"

namespace continuum::swarm {

using Index3 = std::array<std::int64_t, 3>;

struct SwarmState {
  int dim = 3;
  Index3 extent{1, 1, 1};
  std::vector<Vec3> pos;
  std::vector<Vec3> vel;
  double t = 0.0;

  std::int64_t count() const {
    std::int64_t c = 1;
    for (int a = 0; a < dim; ++a) c *= extent[static_cast<std::size_t>(a)];
    return c;
  }

  std::int64_t flatten(const Index3& idx) const {
    std::int64_t f = 0;
    for (int a = dim - 1; a >= 0; --a)
      f = f * extent[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
    return f;
  }

  Index3 unflatten(std::int64_t f) const {
    Index3 idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      idx[static_cast<std::size_t>(a)] = f % extent[static_cast<std::size_t>(a)];
      f /= extent[static_cast<std::size_t>(a)];
    }
    return idx;
  }

  bool in_range(const Index3& idx) const {
    for (int a = 0; a < dim; ++a)
      if (idx[static_cast<std::size_t>(a)] < 0 ||
          idx[static_cast<std::size_t>(a)] >= extent[static_cast<std::size_t>(a)])
        return false;
    return true;
  }

  const Vec3& position(const Index3& idx) const { return pos[static_cast<std::size_t>(flatten(idx))]; }
  const Vec3& velocity(const Index3& idx) const { return vel[static_cast<std::size_t>(flatten(idx))]; }

  static SwarmState cube(int dim, Index3 extent, double spacing) {
    SwarmState s;
    s.dim = dim;
    s.extent = extent;
    for (int a = dim; a < 3; ++a) s.extent[static_cast<std::size_t>(a)] = 1;
    const std::int64_t n = s.count();
    s.pos.resize(static_cast<std::size_t>(n));
    s.vel.assign(static_cast<std::size_t>(n), Vec3{0, 0, 0});
    for (std::int64_t f = 0; f < n; ++f) {
      const Index3 idx = s.unflatten(f);
      Vec3 x{0, 0, 0};
      for (int a = 0; a < dim; ++a)
        x[static_cast<std::size_t>(a)] = spacing * static_cast<double>(idx[static_cast<std::size_t>(a)]);
      s.pos[static_cast<std::size_t>(f)] = x;
    }
    return s;
  }
};

namespace detail {

// Resolves idx + delta, synthesising ghosts axis by axis. Each recursion
// moves one out-of-range axis a single step inward, so it terminates for the
// |delta| <= 1 lookups the tensors need.
template <typename Field>
Vec3 resolve_virtual(const SwarmState& s, Index3 idx, const Field& field, double position_factor,
                     double inward_factor) {
  for (int a = 0; a < s.dim; ++a) {
    const std::int64_t v = idx[static_cast<std::size_t>(a)];
    const std::int64_t e = s.extent[static_cast<std::size_t>(a)];
    if (v >= 0 && v < e) continue;
    Index3 base = idx, inward = idx;
    if (v < 0) {
      base[static_cast<std::size_t>(a)] = v + 1;
      inward[static_cast<std::size_t>(a)] = v + 2;
    } else {
      base[static_cast<std::size_t>(a)] = v - 1;
      inward[static_cast<std::size_t>(a)] = v - 2;
    }
    const Vec3 b = resolve_virtual(s, base, field, position_factor, inward_factor);
    const Vec3 i = resolve_virtual(s, inward, field, position_factor, inward_factor);
    return position_factor * b - inward_factor * i;
  }
  return field(s.flatten(idx));
}

}  // namespace detail

// Position of agent idx + delta, with ghost positions x = 3 x_base - 2 x_inward.
inline Vec3 virtual_position(const SwarmState& s, const Index3& base, const Index3& delta) {
  Index3 idx{base[0] + delta[0], base[1] + delta[1], base[2] + delta[2]};
  return detail::resolve_virtual(
      s, idx, [&](std::int64_t f) { return s.pos[static_cast<std::size_t>(f)]; }, 3.0, 2.0);
}

// Velocity of agent idx + delta, with ghost velocities v = 2 v_base - v_inward.
inline Vec3 virtual_velocity(const SwarmState& s, const Index3& base, const Index3& delta) {
  Index3 idx{base[0] + delta[0], base[1] + delta[1], base[2] + delta[2]};
  return detail::resolve_virtual(
      s, idx, [&](std::int64_t f) { return s.vel[static_cast<std::size_t>(f)]; }, 2.0, 1.0);
}

// Spec-facing single-axis forms.
inline Vec3 ghost_position(const SwarmState& s, const Index3& boundary_agent, int axis,
                           int side) {
  Index3 delta{0, 0, 0};
  delta[static_cast<std::size_t>(axis)] = side;
  return virtual_position(s, boundary_agent, delta);
}

inline Vec3 ghost_velocity(const SwarmState& s, const Index3& boundary_agent, int axis,
                           int side) {
  Index3 delta{0, 0, 0};
  delta[static_cast<std::size_t>(axis)] = side;
  return virtual_velocity(s, boundary_agent, delta);
}

}  // namespace continuum::swarm
