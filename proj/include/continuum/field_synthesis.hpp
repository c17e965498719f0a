#pragma once

// Seeded synthetic smooth fields for the residual checks: periodic trig
// perturbations for maps and scalars, and conformal index maps (holomorphic
// perturbations) for the isotropic lemma in 2D.

#include <cmath>
#include <cstdint>
#include <functional>

#include "continuum/field_checks.hpp"

namespace continuum {

class FieldRng {
 public:
  explicit FieldRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  double uniform(double lo, double hi) {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    return lo + (hi - lo) * static_cast<double>(z >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t state_;
};

// Periodic vector perturbation with |d pert| < 0.5 per component, so
// x(M) = M + pert(M) stays a diffeomorphism.
inline std::function<Vec3(const Vec3&)> random_periodic_map_perturbation(int dim,
                                                                         std::uint64_t seed,
                                                                         double strength = 0.08) {
  FieldRng rng(seed);
  struct Harmonic {
    int k[3];
    double amp, phase;
  };
  std::vector<std::array<Harmonic, 3>> modes(2);
  for (auto& triple : modes)
    for (int c = 0; c < 3; ++c) {
      triple[static_cast<std::size_t>(c)].k[0] = static_cast<int>(rng.uniform(1.0, 3.999));
      triple[static_cast<std::size_t>(c)].k[1] = static_cast<int>(rng.uniform(1.0, 3.999));
      triple[static_cast<std::size_t>(c)].k[2] = static_cast<int>(rng.uniform(1.0, 3.999));
      triple[static_cast<std::size_t>(c)].amp = rng.uniform(0.3, 1.0);
      triple[static_cast<std::size_t>(c)].phase = rng.uniform(0.0, 2.0 * M_PI);
    }
  return [dim, modes, strength](const Vec3& m) {
    Vec3 out{0, 0, 0};
    for (const auto& triple : modes)
      for (int c = 0; c < dim; ++c) {
        const auto& h = triple[static_cast<std::size_t>(c)];
        double phase = h.phase;
        for (int a = 0; a < dim; ++a)
          phase += h.k[a] * m[static_cast<std::size_t>(a)];
        const double kmax = std::max({h.k[0], h.k[1], h.k[2]});
        out[static_cast<std::size_t>(c)] +=
            strength * h.amp / (kmax * kmax * 2.0) * std::sin(phase);
      }
    return out;
  };
}

// Periodic scalar field 1 + small trig ripple.
inline std::function<double(const Vec3&)> random_periodic_scalar(int dim, std::uint64_t seed,
                                                                 double strength = 0.1) {
  FieldRng rng(seed);
  const int k1 = static_cast<int>(rng.uniform(1.0, 3.999));
  const int k2 = static_cast<int>(rng.uniform(1.0, 3.999));
  const double a1 = rng.uniform(0.4, 1.0) * strength;
  const double a2 = rng.uniform(0.4, 1.0) * strength;
  const double p1 = rng.uniform(0.0, 2.0 * M_PI);
  const double p2 = rng.uniform(0.0, 2.0 * M_PI);
  return [dim, k1, k2, a1, a2, p1, p2](const Vec3& x) {
    double phase1 = p1, phase2 = p2;
    for (int a = 0; a < dim; ++a) {
      phase1 += k1 * x[static_cast<std::size_t>(a)];
      phase2 += (a % 2 == 0 ? k2 : -k2) * x[static_cast<std::size_t>(a)];
    }
    return 1.0 + a1 * std::sin(phase1) + a2 * std::cos(phase2);
  };
}

// Periodic divergence-free-ish velocity field (exactly divergence free in
// 2D via a stream function; plain trig in 1D).
inline std::function<Vec3(const Vec3&)> random_periodic_velocity(int dim, std::uint64_t seed) {
  FieldRng rng(seed);
  const int k = static_cast<int>(rng.uniform(1.0, 2.999));
  const double amp = rng.uniform(0.3, 0.8);
  const double phase = rng.uniform(0.0, 2.0 * M_PI);
  return [dim, k, amp, phase](const Vec3& x) {
    Vec3 u{0, 0, 0};
    if (dim == 1) {
      u[0] = amp * std::sin(k * x[0] + phase);
    } else {
      // Stream function psi = amp sin(k x) sin(k y): u = (psi_y, -psi_x).
      u[0] = amp * k * std::sin(k * x[0] + phase) * std::cos(k * x[1]);
      u[1] = -amp * k * std::cos(k * x[0] + phase) * std::sin(k * x[1]);
      if (dim == 3) u[2] = amp * std::sin(k * x[2]);
    }
    return u;
  };
}

// Conformal (isotropic-Jacobian) index-map perturbation.
//  - 1D: any monotone map; a periodic trig perturbation.
//  - 2D: holomorphic perturbation M(z) = z + sum eps_k e^{i(k z + phi_k)}.
//  - 3D: Liouville leaves only Moebius maps; a sphere inversion centred
//    outside the domain box composed with scaling gives a smooth conformal
//    map with genuinely varying lambda(x).
inline std::function<Vec3(const Vec3&)> random_conformal_perturbation(int dim,
                                                                      std::uint64_t seed,
                                                                      double strength = 0.05) {
  FieldRng rng(seed);
  if (dim == 1) {
    const int k = static_cast<int>(rng.uniform(1.0, 3.999));
    const double amp = strength * rng.uniform(0.5, 1.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    return [k, amp, phase](const Vec3& x) {
      return Vec3{amp * std::sin(k * x[0] + phase), 0, 0};
    };
  }
  if (dim == 2) {
    const int k1 = 1;
    const int k2 = 2;
    const double a1 = strength * rng.uniform(0.5, 1.0);
    const double a2 = strength * rng.uniform(0.2, 0.5);
    const double p1 = rng.uniform(0.0, 2.0 * M_PI);
    const double p2 = rng.uniform(0.0, 2.0 * M_PI);
    return [k1, k2, a1, a2, p1, p2](const Vec3& x) {
      // e^{i(k z + p)} = e^{-k x1} (cos(k x0 + p) + i sin(k x0 + p))
      const double e1 = std::exp(-k1 * x[1]);
      const double e2 = std::exp(-k2 * x[1]);
      const double re = a1 * e1 * std::cos(k1 * x[0] + p1) + a2 * e2 * std::cos(k2 * x[0] + p2);
      const double im = a1 * e1 * std::sin(k1 * x[0] + p1) + a2 * e2 * std::sin(k2 * x[0] + p2);
      return Vec3{re, im, 0};
    };
  }
  // 3D Moebius: M(x) = alpha (x - b) / |x - b|^2, with the inversion centre
  // b outside [0, 2 pi]^3 and alpha sized so lambda = alpha / |x - b|^2 ~ 1.
  const Vec3 b{-rng.uniform(2.0, 5.0), M_PI + rng.uniform(-2.0, 2.0),
               M_PI + rng.uniform(-2.0, 2.0)};
  const double alpha = rng.uniform(20.0, 45.0);
  return [b, alpha](const Vec3& x) {
    const Vec3 d = x - b;
    const double r2 = dot(d, d);
    const Vec3 m = (alpha / r2) * d;
    return m - x;  // perturbation form: M(x) = x + pert(x)
  };
}

// Least-squares slope of log(residual) against log(h).
inline double log_log_slope(const std::vector<double>& hs, const std::vector<double>& residuals) {
  const std::size_t n = hs.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = std::log(hs[i]);
    const double y = std::log(residuals[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace continuum
