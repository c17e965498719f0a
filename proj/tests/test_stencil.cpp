#include "continuum/stencil.hpp"

#include <gtest/gtest.h>

#include <set>

#include "support/rational_gauss.hpp"

namespace continuum {
namespace {

using testing::fd_weights_oracle;
using testing::Rng;

std::vector<Rat> rats(std::initializer_list<long long> values) {
  std::vector<Rat> out;
  for (long long v : values) out.emplace_back(v);
  return out;
}

TEST(Vandermonde, DefinitionWithZeroPowerConvention) {
  const auto m = vandermonde(Stencil({1, 0}), 2);
  // canonical ordering sorts shifts to {0, 1}
  EXPECT_EQ(m[0][0], 1);
  EXPECT_EQ(m[0][1], 1);
  EXPECT_EQ(m[1][0], 0);
  EXPECT_EQ(m[1][1], 1);
}

TEST(Vandermonde, ThreeRowsCentered) {
  const auto m = vandermonde(Stencil({-1, 1}), 3);
  EXPECT_EQ(m[0], rats({1, 1}));
  EXPECT_EQ(m[1], rats({-1, 1}));
  EXPECT_EQ(m[2], rats({1, 1}));
}

TEST(Vandermonde, SinglePointIdentity) {
  const auto m = vandermonde(Stencil({0}), 1);
  ASSERT_EQ(m.size(), 1u);
  EXPECT_EQ(m[0], rats({1}));
}

TEST(ContinueLinear, TransportFirstOrder) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  const auto pde = continue_linear(transport, 1);
  EXPECT_EQ(pde.coeffs, rats({0, 1}));
}

TEST(ContinueLinear, TransportAllOrdersAreOne) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  const auto pde = continue_linear(transport, 6);
  EXPECT_EQ(pde.coeffs, rats({0, 1, 1, 1, 1, 1, 1}));
}

TEST(ContinueLinear, ZeroGainsGiveZeroPde) {
  const LinearOdeSpec zero({-2, 0, 3}, rats({0, 0, 0}), 1);
  EXPECT_EQ(continue_linear(zero, 3).coeffs, rats({0, 0, 0, 0}));
}

TEST(ContinueLinear, CentralDifference) {
  const LinearOdeSpec central({-1, 1}, {Rat(-1) / 2, Rat(1) / 2}, 1);
  EXPECT_EQ(continue_linear(central, 2).coeffs, rats({0, 1, 0}));
}

TEST(ContinueLinear, RejectsInvalidOrderUnlessUnchecked) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  EXPECT_THROW(continue_linear(transport, 0), validity_error);
  EXPECT_NO_THROW(continue_linear(transport, 0, ValidityCheck::unchecked));
}

TEST(DiscretizeDerivative, ForwardDifference) {
  const Rat dx(3, 2);
  const auto w = discretize_derivative({1, Stencil({0, 1}), dx});
  EXPECT_EQ(w[0], Rat(-1) / dx);
  EXPECT_EQ(w[1], Rat(1) / dx);
}

TEST(DiscretizeDerivative, CentralDifference) {
  const Rat dx(2);
  const auto w = discretize_derivative({1, Stencil({-1, 1}), dx});
  EXPECT_EQ(w[0], Rat(-1) / (2 * dx));
  EXPECT_EQ(w[1], Rat(1) / (2 * dx));
}

TEST(DiscretizeDerivative, SecondDerivativeThreePoint) {
  const Rat dx(1, 4);
  const auto w = discretize_derivative({2, Stencil({-1, 0, 1}), dx});
  const Rat dx2 = dx * dx;
  EXPECT_EQ(w[0], Rat(1) / dx2);
  EXPECT_EQ(w[1], Rat(-2) / dx2);
  EXPECT_EQ(w[2], Rat(1) / dx2);
}

TEST(DiscretizeDerivative, RejectsOrderNotBelowSize) {
  EXPECT_THROW(discretize_derivative({2, Stencil({0, 1}), Rat(1)}), validity_error);
}

TEST(DiscretizeDerivative, MatchesGaussianEliminationOracleUpToSizeSeven) {
  Rng rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 7));
    std::set<std::int64_t> shift_set;
    while (shift_set.size() < static_cast<std::size_t>(n))
      shift_set.insert(rng.uniform_int(-8, 8));
    const std::vector<std::int64_t> shifts(shift_set.begin(), shift_set.end());
    const int m = static_cast<int>(rng.uniform_int(0, n - 1));
    const Rat dx = Rat(rng.uniform_int(1, 5)) / rng.uniform_int(1, 5);
    const auto lagrange = discretize_derivative({m, Stencil(shifts), dx});
    const auto oracle = fd_weights_oracle(shifts, m, dx);
    EXPECT_EQ(lagrange, oracle) << "n=" << n << " m=" << m;
  }
}

TEST(DiscretizePde, TransportPde) {
  const PdeCoefficients pde(rats({0, 1}), 1);
  const auto ode = discretize_pde(pde, Stencil({0, 1}));
  EXPECT_EQ(ode.stencil.shifts(), (std::vector<std::int64_t>{0, 1}));
  EXPECT_EQ(ode.gains, rats({-1, 1}));
}

TEST(DiscretizePde, ZeroPdeGivesZeroGains) {
  const PdeCoefficients pde(rats({0, 0}), 1);
  const auto ode = discretize_pde(pde, Stencil({-3, 2}));
  EXPECT_EQ(ode.gains, rats({0, 0}));
}

TEST(DiscretizePde, CentralFromSecondOrderPde) {
  const PdeCoefficients pde(rats({0, 1, 0}), 1);
  const auto ode = discretize_pde(pde, Stencil({-1, 0, 1}));
  EXPECT_EQ(ode.gains, (std::vector<Rat>{Rat(-1) / 2, Rat(0), Rat(1) / 2}));
}

TEST(DiscretizePde, InsufficientStencilReported) {
  const PdeCoefficients pde(rats({0, 0, 1}), 1);
  EXPECT_THROW(discretize_pde(pde, Stencil({0, 1})), validity_error);
}

TEST(RoundTrip, SquareCaseIsIdentity) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  const auto result = round_trip_check(transport, 1, {});
  EXPECT_TRUE(result.identity);
  EXPECT_EQ(result.recovered.gains, rats({-1, 1}));  // canonical order {0,1}
}

TEST(RoundTrip, ExtraPointRecoversZeroGain) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  const auto result = round_trip_check(transport, 2, {-1});
  EXPECT_TRUE(result.identity);
  EXPECT_EQ(result.recovered.stencil.shifts(), (std::vector<std::int64_t>{-1, 0, 1}));
  EXPECT_EQ(result.recovered.gains, rats({0, -1, 1}));
}

TEST(RoundTrip, InvalidOrderPropagates) {
  const LinearOdeSpec transport({1, 0}, rats({1, -1}), 1);
  EXPECT_THROW(round_trip_check(transport, 0, {}), validity_error);
}

TEST(OrderOfAccuracy, ForwardDifferenceIsZero) {
  const LinearOdeSpec fwd({0, 1}, rats({-1, 1}), 1);
  EXPECT_EQ(order_of_accuracy(fwd, 1), 0);
}

TEST(OrderOfAccuracy, CentralDifferenceGetsBonus) {
  const LinearOdeSpec central({-1, 1}, {Rat(-1) / 2, Rat(1) / 2}, 1);
  EXPECT_EQ(order_of_accuracy(central, 1), 1);
}

TEST(OrderOfAccuracy, HeatStencilGetsBonus) {
  const LinearOdeSpec heat({-1, 0, 1}, rats({1, -2, 1}), 1);
  EXPECT_EQ(order_of_accuracy(heat, 2), 1);
}

// Continue -> discretize on the same stencil is the identity map in the
// square case, for random specs.
TEST(Property, SquareRoundTripIdentity) {
  Rng rng(77);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 5));
    std::set<std::int64_t> shift_set;
    while (shift_set.size() < static_cast<std::size_t>(n))
      shift_set.insert(rng.uniform_int(-5, 5));
    std::vector<std::int64_t> shifts(shift_set.begin(), shift_set.end());
    std::vector<Rat> gains;
    for (int j = 0; j < n; ++j) gains.push_back(rng.rational(9, 9));
    const LinearOdeSpec ode(shifts, gains, Rat(rng.uniform_int(1, 4)));
    const auto result = round_trip_check(ode, n - 1, {});
    EXPECT_TRUE(result.identity);
  }
}

// Recovered gains on artificial stencil points are exactly zero for
// arbitrary extras.
TEST(Property, ZeroPaddingOnExtraShifts) {
  Rng rng(78);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 4));
    std::set<std::int64_t> shift_set;
    while (shift_set.size() < static_cast<std::size_t>(n))
      shift_set.insert(rng.uniform_int(-5, 5));
    const std::vector<std::int64_t> shifts(shift_set.begin(), shift_set.end());
    std::vector<Rat> gains;
    for (int j = 0; j < n; ++j) gains.push_back(rng.rational(9, 9));
    const int extras = static_cast<int>(rng.uniform_int(1, 3));
    std::set<std::int64_t> extra_set;
    while (extra_set.size() < static_cast<std::size_t>(extras)) {
      const std::int64_t s = rng.uniform_int(-9, 9);
      if (!shift_set.count(s)) extra_set.insert(s);
    }
    const LinearOdeSpec ode(shifts, gains, 1);
    const auto result =
        round_trip_check(ode, n + extras - 1,
                         std::vector<std::int64_t>(extra_set.begin(), extra_set.end()));
    EXPECT_TRUE(result.identity);
  }
}

// continue_linear is linear in the gains for specs sharing a stencil.
TEST(Property, LinearityInGains) {
  Rng rng(79);
  for (int trial = 0; trial < 100; ++trial) {
    const std::vector<std::int64_t> shifts{-2, 0, 1, 3};
    std::vector<Rat> ga, gb, gmix;
    const Rat alpha = rng.rational(5, 3), beta = rng.rational(5, 3);
    for (int j = 0; j < 4; ++j) {
      ga.push_back(rng.rational(9, 9));
      gb.push_back(rng.rational(9, 9));
      gmix.push_back(alpha * ga.back() + beta * gb.back());
    }
    const int d = 5;
    const auto ca = continue_linear({shifts, ga, 1}, d).coeffs;
    const auto cb = continue_linear({shifts, gb, 1}, d).coeffs;
    const auto cmix = continue_linear({shifts, gmix, 1}, d).coeffs;
    for (int k = 0; k <= d; ++k)
      EXPECT_EQ(cmix[static_cast<std::size_t>(k)],
                alpha * ca[static_cast<std::size_t>(k)] + beta * cb[static_cast<std::size_t>(k)]);
  }
}

TEST(Stencil, RejectsDuplicatesAndEmpty) {
  EXPECT_THROW(Stencil({1, 1}), validity_error);
  EXPECT_THROW(Stencil(std::vector<std::int64_t>{}), validity_error);
}

TEST(LinearOdeSpec, CanonicalisesOrdering) {
  const LinearOdeSpec ode({2, -1, 0}, rats({5, 7, 11}), 1);
  EXPECT_EQ(ode.stencil.shifts(), (std::vector<std::int64_t>{-1, 0, 2}));
  EXPECT_EQ(ode.gains, rats({7, 11, 5}));
}

TEST(LinearOdeSpec, RejectsBadDx) {
  EXPECT_THROW(LinearOdeSpec({0}, rats({1}), 0), validity_error);
  EXPECT_THROW(LinearOdeSpec({0}, rats({1}), -1), validity_error);
}

}  // namespace
}  // namespace continuum
