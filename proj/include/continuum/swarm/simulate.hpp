#pragma once

// Co-simulation of the reference cloud (first-order agents on the desired
// velocity field) and the controlled swarm (double integrators under the
// discretised control law), with the per-step L2 density-deviation metric.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "continuum/swarm/control.hpp"
#include "continuum/swarm/metric.hpp"
#include "continuum/swarm/reference.hpp"

namespace continuum::swarm {

// Deterministic seeded generator (splitmix64); identical seeds give
// bit-identical trajectories on any platform.
class SwarmRng {
 public:
  explicit SwarmRng(std::uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ull) {}

  double uniform(double lo, double hi) {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    z ^= z >> 31;
    const double u = static_cast<double>(z >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

 private:
  std::uint64_t state_;
};

enum class SwarmIntegrator {
  semi_implicit_euler,  // v then x; stable at the default gains
  forward_euler,        // textbook explicit Euler
};

struct SwarmConfig {
  int dim = 3;
  Index3 extent{8, 8, 8};
  double ref_spacing = 1.0;
  double scale = 2.0;           // real cloud = scale * reference positions
  double noise = 2.0;           // i.i.d. U(-noise, noise) per coordinate
  std::uint64_t seed = 42;
  double alpha = 3.0;
  double beta = 100.0;
  double dt = 0.01;
  double t_end = 45.0;
  double window_x0 = 20.0;
  double window_amplitude = 0.05;
  double window_width = 100.0;
  int metric_points = 32;       // metric grid resolution per axis
  int metric_stride = 1;        // evaluate the metric every k-th step
  double divergence_guard = 1e6;
  double singular_floor_scale = 1e-9;  // fallback when |det G| < scale * l^n
  SwarmIntegrator integrator = SwarmIntegrator::semi_implicit_euler;
};

struct MetricPoint {
  double t = 0.0;
  double deviation = 0.0;
};

struct SwarmEvent {
  double t = 0.0;
  std::int64_t agent = 0;
  std::string what;
};

struct SimulationResult {
  std::vector<MetricPoint> metric;
  std::vector<SwarmEvent> events;
  std::int64_t singular_fallbacks = 0;
  double final_time = 0.0;
  Vec3 final_centroid{0, 0, 0};
};

// Per-step trajectory sink: (time, state) for CSV emission; optional.
using TrajectorySink = std::function<void(double, const SwarmState&)>;

inline Vec3 centroid(const SwarmState& s) {
  Vec3 c{0, 0, 0};
  for (const Vec3& x : s.pos) c = c + x;
  return (1.0 / static_cast<double>(s.count())) * c;
}

inline SimulationResult simulate(const SwarmConfig& config,
                                 const TrajectorySink& sink = nullptr) {
  // Reference lattice and its velocity field.
  SwarmState ref_state = SwarmState::cube(config.dim, config.extent, config.ref_spacing);
  WindowField window;
  window.x0 = config.window_x0;
  window.amplitude = config.window_amplitude;
  window.width = config.window_width;
  window.dim = config.dim;
  ReferenceCloud reference(ref_state, window.field());

  // Real cloud: scaled reference plus uniform noise.
  SwarmState real_state = ref_state;
  SwarmRng rng(config.seed);
  for (Vec3& x : real_state.pos) {
    for (int a = 0; a < config.dim; ++a)
      x[static_cast<std::size_t>(a)] = config.scale * x[static_cast<std::size_t>(a)] +
                                       rng.uniform(-config.noise, config.noise);
  }

  const ControlGains gains(config.alpha, config.beta);
  double floor = config.singular_floor_scale;
  for (int a = 0; a < config.dim; ++a) floor *= config.ref_spacing;

  SimulationResult result;
  const std::int64_t agents = real_state.count();
  const std::int64_t steps = static_cast<std::int64_t>(config.t_end / config.dt + 0.5);
  std::vector<Vec3> tau(static_cast<std::size_t>(agents));

  auto record_metric = [&](double t) {
    const DensityCloud real_cloud = build_density_cloud(real_state);
    result.metric.push_back(
        {t, density_deviation(real_cloud, reference.density(), config.metric_points)});
  };

  record_metric(0.0);
  if (sink) sink(0.0, real_state);

  for (std::int64_t step = 1; step <= steps; ++step) {
    // Control pass on the frozen state snapshot.
    for (std::int64_t f = 0; f < agents; ++f) {
      const Index3 idx = real_state.unflatten(f);
      const ReferenceSample ref =
          reference.sample(real_state.pos[static_cast<std::size_t>(f)]);
      const ControlResult ctrl = control_force(real_state, idx, gains, ref, floor);
      tau[static_cast<std::size_t>(f)] = ctrl.tau;
      if (ctrl.singular_fallback) {
        ++result.singular_fallbacks;
        if (result.events.size() < 1000)
          result.events.push_back({real_state.t, f, "singular compression tensor"});
      }
    }
    // Integration update.
    for (std::int64_t f = 0; f < agents; ++f) {
      auto& v = real_state.vel[static_cast<std::size_t>(f)];
      auto& x = real_state.pos[static_cast<std::size_t>(f)];
      if (config.integrator == SwarmIntegrator::semi_implicit_euler) {
        v = v + config.dt * tau[static_cast<std::size_t>(f)];
        x = x + config.dt * v;
      } else {
        x = x + config.dt * v;
        v = v + config.dt * tau[static_cast<std::size_t>(f)];
      }
    }
    real_state.t += config.dt;
    reference.step(config.dt);

    // Divergence guard.
    for (const Vec3& x : real_state.pos)
      for (int a = 0; a < config.dim; ++a)
        if (!(std::abs(x[static_cast<std::size_t>(a)]) < config.divergence_guard))
          throw divergence_error("swarm diverged at t = " + std::to_string(real_state.t));

    if (step % config.metric_stride == 0 || step == steps) record_metric(real_state.t);
    if (sink) sink(real_state.t, real_state);
  }

  result.final_time = real_state.t;
  result.final_centroid = centroid(real_state);
  return result;
}

}  // namespace continuum::swarm
