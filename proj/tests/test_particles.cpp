#include "continuum/particles.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "continuum/force_law.hpp"
#include "continuum/lattice_sums.hpp"

namespace continuum {
namespace {

TEST(ForceLaw, ExponentialDecayConverges) {
  const auto check = ForceLaw::exponential().verify_decay(3);
  EXPECT_TRUE(check.converged);
  EXPECT_LT(check.tail_estimate, 1e-6);
}

TEST(ForceLaw, SlowPowerLawFailsDecayCheck) {
  // s^{n-1} * s^{-1/2} grows in n = 3; the integral diverges.
  const auto check = ForceLaw::inverse_power(0.5).verify_decay(3);
  EXPECT_FALSE(check.converged);
}

TEST(Beta, TwoDimensionalUnitRadius) {
  const auto b = beta_sum(1, 2);
  EXPECT_EQ(b.count, 2);  // (1,0) and (0,1)
  EXPECT_EQ(b.beta, 1);
  EXPECT_EQ(b.qq_sum[0][0], 1);
  EXPECT_EQ(b.qq_sum[1][1], 1);
  EXPECT_EQ(b.qq_sum[0][1], 0);
}

TEST(Beta, TwoDimensionalDiagonalRadius) {
  const auto b = beta_sum(2, 2);
  EXPECT_EQ(b.count, 2);  // (1,1) and (1,-1)
  EXPECT_EQ(b.beta, 2);
  EXPECT_EQ(b.qq_sum[0][0], 2);
  EXPECT_EQ(b.qq_sum[1][1], 2);
  EXPECT_EQ(b.qq_sum[0][1], 0);
}

TEST(Beta, OneDimensional) {
  for (std::int64_t r = 1; r <= 5; ++r) {
    const auto b = beta_sum(r * r, 1);
    EXPECT_EQ(b.count, 1);
    EXPECT_EQ(b.beta, r * r);
  }
}

// sum_{q>0, |q| = r} q q^T = beta(r) I exactly, all r^2 <= 100, n = 1..3.
TEST(Property, OuterProductIdentity) {
  for (int n = 1; n <= 3; ++n) {
    const auto table = beta_table(100, n);
    for (const auto& entry : table) {
      if (entry.count == 0) continue;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const Rat expected = i == j ? entry.beta : Rat(0);
          EXPECT_EQ(Rat(entry.qq_sum[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]),
                    expected)
              << "n=" << n << " r2=" << entry.r_squared;
        }
    }
  }
}

// beta(r)/r^n stays inside a fixed positive band on the computed range
// (bounds frozen from a high-precision enumeration oracle).
TEST(Property, BetaGrowthBand) {
  const double lo[4] = {0, 0.9, 0.9, 0.06};
  const double hi[4] = {0, 20.1, 6.1, 3.1};
  for (int n = 1; n <= 3; ++n) {
    const auto table = beta_table(400, n);
    for (const auto& entry : table) {
      if (entry.count == 0) continue;
      const double r = std::sqrt(static_cast<double>(entry.r_squared));
      const double ratio = to_double(entry.beta) / std::pow(r, n);
      EXPECT_GE(ratio, lo[n]) << "n=" << n << " r2=" << entry.r_squared;
      EXPECT_LE(ratio, hi[n]) << "n=" << n << " r2=" << entry.r_squared;
    }
  }
}

TEST(Pressure, GridClosedForm) {
  PressureModel grid{InteractionTopology::grid};
  const auto law = ForceLaw::exponential();
  EXPECT_NEAR(pressure(grid, law, 1.0, 3).value, std::exp(-1.0), 1e-15);
  EXPECT_NEAR(pressure(grid, law, 0.7, 1).value, law.f(0.7), 1e-15);
  EXPECT_NEAR(pressure(grid, law, 2.0, 2).value, law.f(2.0) / 2.0, 1e-15);
}

TEST(Pressure, AllToAllPartialSumMatchesOracle) {
  // sum_{r=1..20} r e^{-r}, frozen from a 40-digit summation oracle.
  PressureModel model{InteractionTopology::all_to_all, 20.0};
  const auto result = pressure(model, ForceLaw::exponential(), 1.0, 1);
  EXPECT_NEAR(result.value, 0.9206735683192746543889979, 1e-14);
}

TEST(Pressure, TailBoundDominatesDroppedTerms) {
  const auto law = ForceLaw::exponential();
  for (int n = 1; n <= 3; ++n) {
    PressureModel small{InteractionTopology::all_to_all, 6.0};
    PressureModel large{InteractionTopology::all_to_all, 12.0};
    const auto ps = pressure(small, law, 1.0, n);
    const auto pl = pressure(large, law, 1.0, n);
    EXPECT_LE(std::abs(pl.value - ps.value), ps.tail_bound) << "n=" << n;
  }
}

TEST(Pressure, NonDecayingLawRejected) {
  PressureModel model{InteractionTopology::all_to_all, 10.0};
  EXPECT_THROW(pressure(model, ForceLaw::inverse_power(0.5), 1.0, 3), validity_error);
}

TEST(Step, TwoParticlesOppositeForces) {
  ParticleLattice lat = ParticleLattice::uniform(1, {2, 1, 1}, 1.5);
  const auto force = particle_forces(lat, ForceLaw::exponential(), {});
  EXPECT_NEAR(force[0][0] + force[1][0], 0.0, 0.0);  // exactly antisymmetric
  EXPECT_GT(std::abs(force[0][0]), 0.0);
}

TEST(Step, UniformPeriodicLatticeIsEquilibrium) {
  ParticleLattice lat = ParticleLattice::uniform(2, {6, 6, 1}, 1.0, true);
  StepOptions opt;
  opt.truncation_radius = 2.9;  // < extent/2: every shell is symmetric
  const auto force = particle_forces(lat, ForceLaw::exponential(), opt);
  for (const auto& f : force) {
    EXPECT_NEAR(f[0], 0.0, 1e-13);
    EXPECT_NEAR(f[1], 0.0, 1e-13);
  }
}

TEST(Step, MomentumConservedOverManySteps) {
  ParticleLattice lat = ParticleLattice::uniform(3, {4, 4, 4}, 1.2);
  // A drift plus a deterministic ripple; unit-mass momentum is nonzero.
  for (std::size_t i = 0; i < lat.velocities.size(); ++i) {
    lat.velocities[i] = {1.0 + 0.01 * std::sin(static_cast<double>(i)),
                         0.02 * std::cos(static_cast<double>(3 * i)), -0.5};
  }
  const Vec3 p0 = total_momentum(lat);
  StepOptions opt;
  for (int step = 0; step < 200; ++step) step_particles(lat, ForceLaw::exponential(), opt, 0.01);
  const Vec3 p1 = total_momentum(lat);
  for (int a = 0; a < 3; ++a)
    EXPECT_NEAR(p1[static_cast<std::size_t>(a)], p0[static_cast<std::size_t>(a)],
                1e-12 * norm(p0));
}

TEST(Step, CollisionReported) {
  ParticleLattice lat = ParticleLattice::uniform(1, {2, 1, 1}, 1.0);
  lat.positions[1][0] = lat.positions[0][0] + 1e-12;
  StepOptions opt;
  EXPECT_THROW(step_particles(lat, ForceLaw::exponential(), opt, 0.01), collision_error);
}

// Small oscillations of the 16-particle periodic spring chain: the measured
// frequency of lattice mode m matches the dispersion 2 sin(pi m / 16) of the
// linearised chain.
TEST(Step, SpringChainDispersion) {
  const int n = 16;
  const int mode = 1;
  const double omega = 2.0 * std::sin(M_PI * mode / n);
  const double amplitude = 1e-4;
  const double dt = 0.005;

  ParticleLattice lat = ParticleLattice::uniform(1, {n, 1, 1}, 1.0, true);
  for (int i = 0; i < n; ++i)
    lat.positions[static_cast<std::size_t>(i)][0] +=
        amplitude * std::cos(2.0 * M_PI * mode * i / n);

  StepOptions opt;
  opt.topology = InteractionTopology::grid;
  const auto law = ForceLaw::spring();

  const double t_total = 10.0 * 2.0 * M_PI / omega;
  const int steps = static_cast<int>(t_total / dt);
  std::vector<double> projection;
  projection.reserve(static_cast<std::size_t>(steps) + 1);
  auto project = [&]() {
    double acc = 0.0;
    for (int i = 0; i < n; ++i)
      acc += (lat.positions[static_cast<std::size_t>(i)][0] - static_cast<double>(i)) *
             std::cos(2.0 * M_PI * mode * i / n);
    projection.push_back(acc);
  };
  project();
  for (int s = 0; s < steps; ++s) {
    step_particles(lat, law, opt, dt);
    project();
  }
  // For a sampled sinusoid, p_{k+1} + p_{k-1} = 2 cos(omega dt) p_k exactly;
  // least squares over the trajectory recovers the discrete rotation angle.
  double num = 0.0, den = 0.0;
  for (std::size_t k = 1; k + 1 < projection.size(); ++k) {
    num += projection[k] * (projection[k - 1] + projection[k + 1]);
    den += 2.0 * projection[k] * projection[k];
  }
  const double measured = std::acos(num / den) / dt;
  EXPECT_NEAR(measured, omega, 1e-6);
}

}  // namespace
}  // namespace continuum
