#include "continuum/field_checks.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "continuum/field_synthesis.hpp"

namespace continuum {
namespace {

TEST(Prop1, ConstantFieldsVanish) {
  // Affine x(M) and constant phi: every second derivative is zero.
  const auto pert = [](const Vec3&) { return Vec3{0, 0, 0}; };
  const auto phi = [](const Vec3&) { return 2.5; };
  EXPECT_NEAR(prop1_residual(1, 64, pert, phi, {1, 0, 0}), 0.0, 1e-12);
  EXPECT_NEAR(prop1_residual(2, 32, pert, phi, {1, -1, 0}), 0.0, 1e-12);
}

TEST(Prop1, SineFieldsRefineAtSecondOrder) {
  const auto pert = [](const Vec3& m) { return Vec3{0.05 * std::sin(m[0]), 0, 0}; };
  const auto phi = [](const Vec3& x) { return 1.0 + 0.1 * std::sin(x[0]); };
  const double coarse = prop1_residual(1, 64, pert, phi, {1, 0, 0});
  const double fine = prop1_residual(1, 128, pert, phi, {1, 0, 0});
  EXPECT_NEAR(coarse / fine, 4.0, 0.8);
}

TEST(Prop1, RandomSmoothFieldsSlope) {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    const int dim = seed % 2 == 0 ? 2 : 1;
    const auto pert = random_periodic_map_perturbation(dim, seed);
    const auto phi = random_periodic_scalar(dim, seed + 100);
    std::array<std::int64_t, 3> q{1, 0, 0};
    if (dim == 2) q = {1, 1, 0};
    std::vector<double> hs, residuals;
    for (int points : {32, 64, 128}) {
      hs.push_back(2.0 * M_PI / points);
      residuals.push_back(prop1_residual(dim, points, pert, phi, q));
    }
    EXPECT_GE(log_log_slope(hs, residuals), 1.7) << "seed " << seed;
  }
}

TEST(Lemma1, IdentityJacobianDivergenceFreeFlow) {
  const auto pert = [](const Vec3&) { return Vec3{0, 0, 0}; };
  // 2D stream-function field: exactly divergence free.
  const auto u = random_periodic_velocity(2, 7);
  const double r = lemma1_residual(2, 48, pert, u, 1e-6);
  EXPECT_NEAR(r, 0.0, 1e-5);  // O(dt) with constant det J = 1
}

TEST(Lemma1, RandomSmoothFieldsSlope) {
  for (std::uint64_t seed : {21ull, 22ull, 23ull}) {
    const int dim = seed % 2 == 0 ? 1 : 2;
    const auto pert = random_periodic_map_perturbation(dim, seed);
    const auto u = random_periodic_velocity(dim, seed + 50);
    std::vector<double> hs, residuals;
    for (int points : {32, 64, 128}) {
      const double h = 2.0 * M_PI / points;
      hs.push_back(h);
      residuals.push_back(lemma1_residual(dim, points, pert, u, h * h));
    }
    EXPECT_GE(log_log_slope(hs, residuals), 1.7) << "seed " << seed;
  }
}

TEST(Lemma2, OneDimensionalReadingIsExact) {
  // In 1D rho * dx/dM = det(J)/J = 1 identically, so the residual vanishes
  // to round-off at any resolution.
  const auto pert = random_conformal_perturbation(1, 31);
  EXPECT_NEAR(lemma2_residual(1, 64, pert), 0.0, 1e-12);
  EXPECT_NEAR(lemma2_residual(1, 128, pert), 0.0, 1e-12);
}

TEST(Lemma2, ConformalMapsRefineAtSecondOrder) {
  for (std::uint64_t seed : {41ull, 42ull, 43ull}) {
    const auto pert = random_conformal_perturbation(2, seed);
    std::vector<double> hs, residuals;
    for (int points : {33, 65, 129}) {
      hs.push_back(2.0 * M_PI / (points - 1));
      residuals.push_back(lemma2_residual(2, points, pert));
    }
    EXPECT_GE(log_log_slope(hs, residuals), 1.7) << "seed " << seed;
  }
}

TEST(Lemma2, NonIsotropicMapBreaksTheIdentity) {
  // A shear map is a legitimate Jacobian but not isotropic; the residual
  // must not vanish under refinement.
  const auto shear = [](const Vec3& x) {
    return Vec3{0.2 * std::sin(x[1]), 0.0, 0.0};
  };
  const double coarse = lemma2_residual(2, 33, shear);
  const double fine = lemma2_residual(2, 129, shear);
  EXPECT_GT(fine, 0.5 * coarse);
  EXPECT_GT(fine, 1e-3);
}

}  // namespace
}  // namespace continuum
