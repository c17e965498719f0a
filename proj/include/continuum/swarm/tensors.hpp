#pragma once

// Discretised compression and velocity tensors at an agent:
//   [G_i]_j = (x_{i+e_j} - x_{i-e_j}) / 2        (column j)
//   [W_i]_j = (v_{i+e_j} - v_{i-e_j}) / 2
// plus the gradient of det G with respect to the lattice index, assembled
// from the cofactor expansion with the discrete second derivatives
//   d2x/dM_j dM_k = (x_{+e_j+e_k} + x_{-e_j-e_k} - x_{+e_j-e_k} - x_{-e_j+e_k}) / 4
//   d2x/dM_j^2    = x_{+e_j} - 2 x_i + x_{-e_j}.
// Missing neighbours resolve through the ghost rules.

#include "continuum/linalg3.hpp"
#include "continuum/swarm/lattice.hpp"

namespace continuum::swarm {

struct LocalTensors {
  Mat3 g = mat3_zero();        // compression tensor estimate, columns dx/dM_j
  Mat3 w = mat3_zero();        // velocity Jacobian estimate
  double det_g = 0.0;
  Vec3 grad_det_g{0, 0, 0};    // d(det G)/dM_j
};

inline LocalTensors local_tensors(const SwarmState& s, const Index3& i) {
  const int n = s.dim;
  LocalTensors t;

  std::array<Vec3, 3> x_plus, x_minus, v_plus, v_minus;
  for (int j = 0; j < n; ++j) {
    Index3 delta{0, 0, 0};
    delta[static_cast<std::size_t>(j)] = 1;
    x_plus[static_cast<std::size_t>(j)] = virtual_position(s, i, delta);
    v_plus[static_cast<std::size_t>(j)] = virtual_velocity(s, i, delta);
    delta[static_cast<std::size_t>(j)] = -1;
    x_minus[static_cast<std::size_t>(j)] = virtual_position(s, i, delta);
    v_minus[static_cast<std::size_t>(j)] = virtual_velocity(s, i, delta);
  }
  for (int j = 0; j < n; ++j)
    for (int c = 0; c < n; ++c) {
      t.g[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] =
          0.5 * (x_plus[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] -
                 x_minus[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
      t.w[static_cast<std::size_t>(c)][static_cast<std::size_t>(j)] =
          0.5 * (v_plus[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)] -
                 v_minus[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
    }
  t.det_g = det(t.g, n);

  // Second derivatives of position; dG/dM_j has columns k = d2x/dM_k dM_j.
  const Vec3 x_center = s.position(i);
  const Mat3 adj = adjugate(t.g, n);
  for (int j = 0; j < n; ++j) {
    Mat3 dg = mat3_zero();
    for (int k = 0; k < n; ++k) {
      Vec3 second;
      if (k == j) {
        second = x_plus[static_cast<std::size_t>(j)] - 2.0 * x_center +
                 x_minus[static_cast<std::size_t>(j)];
      } else {
        Index3 dpp{0, 0, 0}, dmm{0, 0, 0}, dpm{0, 0, 0}, dmp{0, 0, 0};
        dpp[static_cast<std::size_t>(j)] = 1;
        dpp[static_cast<std::size_t>(k)] = 1;
        dmm[static_cast<std::size_t>(j)] = -1;
        dmm[static_cast<std::size_t>(k)] = -1;
        dpm[static_cast<std::size_t>(j)] = 1;
        dpm[static_cast<std::size_t>(k)] = -1;
        dmp[static_cast<std::size_t>(j)] = -1;
        dmp[static_cast<std::size_t>(k)] = 1;
        second = 0.25 * (virtual_position(s, i, dpp) + virtual_position(s, i, dmm) -
                         virtual_position(s, i, dpm) - virtual_position(s, i, dmp));
      }
      for (int c = 0; c < n; ++c)
        dg[static_cast<std::size_t>(c)][static_cast<std::size_t>(k)] = second[static_cast<std::size_t>(c)];
    }
    // d(det G)/dM_j = tr(adj(G) dG/dM_j)
    t.grad_det_g[static_cast<std::size_t>(j)] = trace(matmul(adj, dg, n), n);
  }
  return t;
}

}  // namespace continuum::swarm
