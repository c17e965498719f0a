#pragma once

// Newtonian particle lattice with pairwise radial forces. Particles are
// indexed by multi-indices on a rectangular lattice; interactions run either
// over all offsets within a truncation radius (all-to-all) or over nearest
// neighbours (grid topology). Forces are accumulated pairwise so Newton's
// third law holds exactly in the summation.

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "continuum/force_law.hpp"
#include "continuum/lattice_sums.hpp"
#include "continuum/rational.hpp"

namespace continuum {

using Vec3 = std::array<double, 3>;

inline Vec3 operator+(const Vec3& a, const Vec3& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2]};
}
inline Vec3 operator-(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

class collision_error : public std::runtime_error {
 public:
  explicit collision_error(const std::string& what) : std::runtime_error(what) {}
};

struct ParticleLattice {
  int dim = 1;
  std::array<std::int64_t, 3> extent{1, 1, 1};  // unused axes have extent 1
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;
  bool periodic = false;
  Vec3 period{0, 0, 0};  // spatial period per axis when periodic

  std::int64_t count() const {
    std::int64_t c = 1;
    for (int a = 0; a < dim; ++a) c *= extent[static_cast<std::size_t>(a)];
    return c;
  }

  std::int64_t flatten(const std::array<std::int64_t, 3>& idx) const {
    std::int64_t f = 0;
    for (int a = dim - 1; a >= 0; --a)
      f = f * extent[static_cast<std::size_t>(a)] + idx[static_cast<std::size_t>(a)];
    return f;
  }

  std::array<std::int64_t, 3> unflatten(std::int64_t f) const {
    std::array<std::int64_t, 3> idx{0, 0, 0};
    for (int a = 0; a < dim; ++a) {
      idx[static_cast<std::size_t>(a)] = f % extent[static_cast<std::size_t>(a)];
      f /= extent[static_cast<std::size_t>(a)];
    }
    return idx;
  }

  bool in_range(const std::array<std::int64_t, 3>& idx) const {
    for (int a = 0; a < dim; ++a)
      if (idx[static_cast<std::size_t>(a)] < 0 ||
          idx[static_cast<std::size_t>(a)] >= extent[static_cast<std::size_t>(a)])
        return false;
    return true;
  }

  // Uniform lattice with the given spacing; velocities zero.
  static ParticleLattice uniform(int dim, std::array<std::int64_t, 3> extent, double spacing,
                                 bool periodic = false) {
    ParticleLattice lat;
    lat.dim = dim;
    lat.extent = extent;
    for (int a = dim; a < 3; ++a) lat.extent[static_cast<std::size_t>(a)] = 1;
    lat.periodic = periodic;
    const std::int64_t n = lat.count();
    lat.positions.resize(static_cast<std::size_t>(n));
    lat.velocities.assign(static_cast<std::size_t>(n), Vec3{0, 0, 0});
    for (std::int64_t f = 0; f < n; ++f) {
      const auto idx = lat.unflatten(f);
      Vec3 x{0, 0, 0};
      for (int a = 0; a < dim; ++a)
        x[static_cast<std::size_t>(a)] =
            spacing * static_cast<double>(idx[static_cast<std::size_t>(a)]);
      lat.positions[static_cast<std::size_t>(f)] = x;
    }
    if (periodic)
      for (int a = 0; a < dim; ++a)
        lat.period[static_cast<std::size_t>(a)] =
            spacing * static_cast<double>(lat.extent[static_cast<std::size_t>(a)]);
    return lat;
  }
};

struct StepOptions {
  InteractionTopology topology = InteractionTopology::all_to_all;
  double truncation_radius = 10.0;  // lattice-offset norm cap for all-to-all
  double collision_epsilon = 1e-9;  // minimum allowed pair distance
};

namespace detail {

// Lexicographically positive lattice offsets with |q| <= radius (all-to-all)
// or the positive unit offsets (grid). One offset per interacting pair.
inline std::vector<std::array<std::int64_t, 3>> positive_offsets(const ParticleLattice& lat,
                                                                 const StepOptions& opt) {
  std::vector<std::array<std::int64_t, 3>> offsets;
  if (opt.topology == InteractionTopology::grid) {
    for (int a = 0; a < lat.dim; ++a) {
      std::array<std::int64_t, 3> e{0, 0, 0};
      e[static_cast<std::size_t>(a)] = 1;
      offsets.push_back(e);
    }
    return offsets;
  }
  const std::int64_t r = static_cast<std::int64_t>(opt.truncation_radius);
  const double r2 = opt.truncation_radius * opt.truncation_radius;
  std::array<std::int64_t, 3> q{0, 0, 0};
  const std::int64_t lo0 = 0;  // first axis nonnegative by lex positivity
  for (std::int64_t q0 = lo0; q0 <= r; ++q0) {
    q[0] = q0;
    const std::int64_t b1 = lat.dim > 1 ? r : 0;
    for (std::int64_t q1 = -b1; q1 <= b1; ++q1) {
      q[1] = q1;
      const std::int64_t b2 = lat.dim > 2 ? r : 0;
      for (std::int64_t q2 = -b2; q2 <= b2; ++q2) {
        q[2] = q2;
        const double n2 = static_cast<double>(q0 * q0 + q1 * q1 + q2 * q2);
        if (n2 == 0 || n2 > r2) continue;
        std::vector<std::int64_t> qv(q.begin(), q.begin() + lat.dim);
        if (!lex_positive(qv)) continue;
        offsets.push_back(q);
      }
    }
  }
  return offsets;
}

}  // namespace detail

// Accumulated accelerations (unit mass). Throws collision_error when a pair
// falls below the collision threshold; the lattice is left untouched.
inline std::vector<Vec3> particle_forces(const ParticleLattice& lat, const ForceLaw& law,
                                         const StepOptions& opt) {
  const std::int64_t n = lat.count();
  std::vector<Vec3> force(static_cast<std::size_t>(n), Vec3{0, 0, 0});
  const auto offsets = detail::positive_offsets(lat, opt);
  for (std::int64_t f = 0; f < n; ++f) {
    const auto idx = lat.unflatten(f);
    for (const auto& q : offsets) {
      std::array<std::int64_t, 3> other_idx{idx[0] + q[0], idx[1] + q[1], idx[2] + q[2]};
      // Periodic axes interact through lattice images: the partner is the
      // wrapped particle but the displacement belongs to the unwrapped image.
      Vec3 image_shift{0, 0, 0};
      if (lat.periodic) {
        for (int a = 0; a < lat.dim; ++a) {
          auto& v = other_idx[static_cast<std::size_t>(a)];
          const std::int64_t e = lat.extent[static_cast<std::size_t>(a)];
          std::int64_t wraps = v >= 0 ? v / e : -((-v + e - 1) / e);
          v -= wraps * e;
          image_shift[static_cast<std::size_t>(a)] =
              static_cast<double>(wraps) * lat.period[static_cast<std::size_t>(a)];
        }
      } else if (!lat.in_range(other_idx)) {
        continue;
      }
      const std::int64_t g = lat.flatten(other_idx);
      // Self-images come in mirror pairs whose forces cancel exactly.
      if (g == f) continue;
      const Vec3 d =
          lat.positions[static_cast<std::size_t>(f)] -
          (lat.positions[static_cast<std::size_t>(g)] + image_shift);
      const double dist = norm(d);
      if (dist < opt.collision_epsilon)
        throw collision_error("particles " + std::to_string(f) + " and " + std::to_string(g) +
                              " closer than epsilon (" + std::to_string(dist) + ")");
      const Vec3 fij = law.phi(dist) * d;  // force on f from g
      force[static_cast<std::size_t>(f)] = force[static_cast<std::size_t>(f)] + fij;
      force[static_cast<std::size_t>(g)] = force[static_cast<std::size_t>(g)] - fij;
    }
  }
  return force;
}

// Symplectic-Euler step (v then x): conserves total momentum exactly up to
// rounding because forces are applied in antisymmetric pairs.
inline void step_particles(ParticleLattice& lat, const ForceLaw& law, const StepOptions& opt,
                           double dt) {
  if (dt <= 0) throw std::invalid_argument("step_particles: dt must be positive");
  const auto force = particle_forces(lat, law, opt);
  for (std::size_t i = 0; i < lat.positions.size(); ++i) {
    lat.velocities[i] = lat.velocities[i] + dt * force[i];
    lat.positions[i] = lat.positions[i] + dt * lat.velocities[i];
  }
}

inline Vec3 total_momentum(const ParticleLattice& lat) {
  Vec3 p{0, 0, 0};
  for (const Vec3& v : lat.velocities) p = p + v;
  return p;
}

}  // namespace continuum
