#pragma once

// The per-agent control law. With G and W the discretised compression and
// velocity-Jacobian tensors, v the agent velocity and (rho_d, u_d) the
// desired fields at the agent position:
//
//   tau = [ W G^{-1} + tr(W G^{-1}) - alpha ] v
//       + (beta I - v v^T) (1/det G) G^{-T} (d det G/dM)^T
//       + det G [ alpha rho_d u_d + (beta I - u_d u_d^T) grad rho_d^T
//                 - rho_d (div u_d) u_d ]
//
// A singular compression tensor (|det G| below the floor) falls back to
// damping-only control for the step.

#include <cmath>

#include "continuum/swarm/reference.hpp"
#include "continuum/swarm/tensors.hpp"

namespace continuum::swarm {

struct ControlGains {
  double alpha = 3.0;   // velocity damping
  double beta = 100.0;  // density-gradient stiffness

  ControlGains(double a, double b) : alpha(a), beta(b) {
    if (a <= 0 || b <= 0) throw std::invalid_argument("control gains must be positive");
  }
};

struct ControlResult {
  Vec3 tau{0, 0, 0};
  bool singular_fallback = false;
};

inline ControlResult control_force(const SwarmState& s, const Index3& i,
                                   const ControlGains& gains, const ReferenceSample& ref,
                                   double singular_floor) {
  const int n = s.dim;
  const Vec3 v = s.velocity(i);
  const LocalTensors t = local_tensors(s, i);

  ControlResult result;
  if (std::abs(t.det_g) < singular_floor) {
    result.tau = (-gains.alpha) * v;
    result.singular_fallback = true;
    return result;
  }

  const Mat3 ginv = inverse(t.g, n);
  // Velocity bracket: W G^{-1} v + tr(W G^{-1}) v - alpha v.
  const Vec3 wginv_v = matvec(t.w, matvec(ginv, v, n), n);
  const double div_u = trace(matmul(t.w, ginv, n), n);
  Vec3 tau = wginv_v + (div_u - gains.alpha) * v;

  // (beta I - v v^T) rho G^{-T} grad_M(det G)^T with rho = 1/det G.
  const Vec3 g_dir = matvec_t(ginv, t.grad_det_g, n);  // G^{-T} grad^T
  const Vec3 scaled = (1.0 / t.det_g) * g_dir;
  tau = tau + gains.beta * scaled - dot(v, scaled) * v;

  // Desired-field bracket scaled by det G.
  const Vec3 u_d = ref.u_d;
  const Vec3 desired = gains.alpha * ref.rho_d * u_d +
                       (gains.beta * ref.grad_rho_d - dot(u_d, ref.grad_rho_d) * u_d) -
                       (ref.rho_d * ref.div_u_d) * u_d;
  tau = tau + t.det_g * desired;

  result.tau = tau;
  return result;
}

}  // namespace continuum::swarm
