#include "continuum/graph.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "continuum/graph_continuation.hpp"
#include "continuum/pde_expr.hpp"
#include "support/rational_gauss.hpp"

namespace continuum {
namespace {

using testing::Rng;

// dot rho_i = sin(rho_{i+1} - rho_i) - sin(rho_i - rho_{i-1})
ComputationGraph kuramoto_graph(std::int64_t translate = 0) {
  GraphBuilder b;
  const int lm1 = b.leaf(Rat(-1 + translate));
  const int l0a = b.leaf(Rat(translate));
  const int l0b = b.leaf(Rat(translate));
  const int lp1 = b.leaf(Rat(1 + translate));
  const int sin_left = b.fn("sin", {{lm1, Rat(-1)}, {l0a, Rat(1)}});
  const int sin_right = b.fn("sin", {{l0b, Rat(-1)}, {lp1, Rat(1)}});
  const int root = b.fn("identity", {{sin_left, Rat(-1)}, {sin_right, Rat(1)}});
  return b.build(root);
}

TEST(SimilarSubgraphs, KuramotoHasThreeClasses) {
  const auto classes = find_similar_subgraphs(kuramoto_graph());
  ASSERT_EQ(classes.size(), 3u);
  // One class of two sin subgraphs under the root, offset 1 apart.
  int sin_classes = 0, leaf_classes = 0;
  for (const auto& cls : classes) {
    ASSERT_EQ(cls.members.size(), 2u);
    EXPECT_EQ(cls.members[0].offset, 0);
    EXPECT_EQ(cls.members[1].offset, 1);
    if (cls.shape_key.rfind("sin", 0) == 0)
      ++sin_classes;
    else
      ++leaf_classes;
  }
  EXPECT_EQ(sin_classes, 1);
  EXPECT_EQ(leaf_classes, 2);
}

TEST(SimilarSubgraphs, SingleLeafSingletonClass) {
  GraphBuilder b;
  const int leaf = b.leaf(0);
  const int root = b.fn("identity", {{leaf, Rat(1)}});
  const auto classes = find_similar_subgraphs(b.build(root));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0].members.size(), 1u);
}

TEST(SimilarSubgraphs, LinearSumIsOneClass) {
  GraphBuilder b;
  std::vector<GraphEdge> inputs;
  for (std::int64_t s : {-2, 0, 1, 3}) inputs.push_back({b.leaf(Rat(s)), Rat(s + 5)});
  const int root = b.fn("identity", inputs);
  const auto classes = find_similar_subgraphs(b.build(root));
  ASSERT_EQ(classes.size(), 1u);
  EXPECT_EQ(classes[0].members.size(), 4u);
}

TEST(Positions, KuramotoHalfIntegerSines) {
  const auto g = kuramoto_graph();
  const auto pos = assign_positions(g);
  // Nodes: 0..3 leaves (-1, 0, 0, 1), 4 = left sin, 5 = right sin, 6 = root.
  EXPECT_EQ(pos.at(4), Rat(-1, 2));
  EXPECT_EQ(pos.at(5), Rat(1, 2));
  EXPECT_EQ(pos.at(6), 0);
}

TEST(Positions, LeafEqualsShift) {
  GraphBuilder b;
  const int leaf = b.leaf(3);
  const int root = b.fn("identity", {{leaf, Rat(1)}});
  const auto pos = assign_positions(b.build(root));
  EXPECT_EQ(pos.at(leaf), 3);
}

TEST(ContinueGraph, KuramotoEmitsTheSineFluxPde) {
  const auto result = continue_graph(kuramoto_graph(), 1);
  const ExprPtr expected =
      expr_term(Rat(1), 1,
                expr_deriv(1, expr_fn("sin", expr_term(Rat(1), 1, expr_deriv(1, expr_state())))));
  EXPECT_EQ(to_sexpr(result.expr), to_sexpr(expected));
  EXPECT_EQ(to_unicode(result.expr),
            "Δx·∂/∂x[sin(Δx·∂ρ/∂x)]");
}

TEST(ContinueGraph, PointwiseNonlinearityKeepsZeroOrder) {
  GraphBuilder b;
  const int leaf = b.leaf(0);
  const int root = b.fn("sin", {{leaf, Rat(1)}});
  const auto result = continue_graph(b.build(root), 1);
  EXPECT_EQ(to_sexpr(result.expr), to_sexpr(expr_fn("sin", expr_state())));
}

// For purely linear graphs the graph continuation agrees exactly with the
// linear continuation formula.
TEST(ContinueGraph, LinearGraphMatchesContinueLinear) {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = static_cast<int>(rng.uniform_int(1, 5));
    std::set<std::int64_t> shift_set;
    while (shift_set.size() < static_cast<std::size_t>(n))
      shift_set.insert(rng.uniform_int(-4, 4));
    std::vector<std::int64_t> shifts(shift_set.begin(), shift_set.end());
    std::vector<Rat> gains;
    for (int j = 0; j < n; ++j) gains.push_back(rng.rational(7, 5));

    GraphBuilder b;
    std::vector<GraphEdge> inputs;
    for (int j = 0; j < n; ++j) inputs.push_back({b.leaf(Rat(shifts[j])), gains[j]});
    const auto result = continue_graph(b.build(b.fn("identity", inputs)), 1);

    const LinearOdeSpec ode(shifts, gains, 1);
    const auto pde = continue_linear(ode, n - 1);
    // Leaf positions are the shifts and the root is pinned at 0, so the class
    // offsets coincide with the stencil and the coefficients must match.
    std::vector<ExprPtr> terms;
    for (int k = 0; k <= pde.order(); ++k) {
      const Rat c = pde.coeffs[static_cast<std::size_t>(k)];
      if (c == 0) continue;
      terms.push_back(expr_term(c / rat_factorial(k), k,
                                k == 0 ? expr_state() : expr_deriv(k, expr_state())));
    }
    EXPECT_EQ(to_sexpr(result.expr), to_sexpr(expr_sum(terms)));
  }
}

TEST(ContinueGraph, CoincidentPositionsAreStructuralErrors) {
  GraphBuilder b;
  // Two structurally identical sin subgraphs with identical leaf-average
  // positions feeding one parent: offsets coincide.
  const int a1 = b.leaf(0);
  const int s1 = b.fn("sin", {{a1, Rat(1)}});
  const int a2 = b.leaf(0);
  const int s2 = b.fn("sin", {{a2, Rat(1)}});
  const int root = b.fn("identity", {{s1, Rat(1)}, {s2, Rat(1)}});
  EXPECT_THROW(continue_graph(b.build(root), 1), validity_error);
}

TEST(ContinueGraph, TotalOrderCapDropsCompositeTerms) {
  // Order-of-accuracy 1 on the Kuramoto classes produces third-order
  // composite terms; a cap of 2 trims back to the basic flux form.
  GraphContinuationOptions options;
  options.default_accuracy = 1;
  options.total_order_cap = 2;
  const auto capped = continue_graph(kuramoto_graph(), 1, options);
  EXPECT_LE(combined_order(capped.expr), 2);
}

TEST(SameStructure, TranslatedKuramotoMatches) {
  EXPECT_TRUE(same_structure(kuramoto_graph(), kuramoto_graph(1)));
}

TEST(SameStructure, DifferentRootFunctionsDiffer) {
  GraphBuilder b1;
  const int r1 = b1.fn("sin", {{b1.leaf(0), Rat(1)}});
  GraphBuilder b2;
  const int r2 = b2.fn("cos", {{b2.leaf(0), Rat(1)}});
  EXPECT_FALSE(same_structure(b1.build(r1), b2.build(r2)));
}

TEST(SameStructure, PaddingNormalisationReconciles) {
  GraphBuilder b1;
  const int r1 = b1.fn("sin", {{b1.leaf(0), Rat(1)}});
  GraphBuilder b2;
  const int r2 = b2.fn("cos", {{b2.leaf(0), Rat(1)}});
  const auto [g1, g2] = pad_to_same_structure(b1.build(r1), b2.build(r2));
  EXPECT_TRUE(same_structure(g1, g2));
}

// Translating every leaf shift translates every assigned position (root
// stays pinned to the evaluation point) and leaves the Kuramoto PDE
// expression unchanged.
TEST(Property, ShiftEquivariance) {
  for (std::int64_t c : {-3, -1, 2, 5}) {
    const auto base = assign_positions(kuramoto_graph());
    const auto moved = assign_positions(kuramoto_graph(c));
    for (const auto& [node, p] : base) {
      if (node == 6) continue;  // root pinned
      EXPECT_EQ(moved.at(node), p + c);
    }
    EXPECT_EQ(to_sexpr(continue_graph(kuramoto_graph(c), 1).expr),
              to_sexpr(continue_graph(kuramoto_graph(), 1).expr));
  }
}

// One Euler step of the 64-node Kuramoto ring versus one Euler step of a
// fine discretisation of the continued PDE, refined 64 -> 256: the gap
// shrinks with slope >= 1.7 in log-log.
TEST(Property, KuramotoOdeVsPdeRefinement) {
  const auto pde = continue_graph(kuramoto_graph(), 1);
  const auto registry = FunctionRegistry::standard();
  const double dt = 0.1;
  std::vector<double> errors, spacings;
  for (int n : {64, 128, 256}) {
    const double dx = 1.0 / n;
    const int fine_factor = 32;
    const int m = n * fine_factor;
    std::vector<double> coarse(n), fine(m);
    auto profile = [](double x) { return 0.5 * std::sin(2.0 * M_PI * x); };
    for (int i = 0; i < n; ++i) coarse[static_cast<std::size_t>(i)] = profile(i * dx);
    for (int i = 0; i < m; ++i)
      fine[static_cast<std::size_t>(i)] = profile(i * dx / fine_factor);

    // ODE step: dot rho_i = sin(rho_{i+1}-rho_i) - sin(rho_i-rho_{i-1}).
    std::vector<double> ode_step(coarse);
    for (int i = 0; i < n; ++i) {
      const double rp = coarse[static_cast<std::size_t>((i + 1) % n)];
      const double rm = coarse[static_cast<std::size_t>((i + n - 1) % n)];
      const double r0 = coarse[static_cast<std::size_t>(i)];
      ode_step[static_cast<std::size_t>(i)] += dt * (std::sin(rp - r0) - std::sin(r0 - rm));
    }

    // PDE step: evaluate the continued expression on the fine grid with the
    // coarse lattice spacing substituted for dx, then restrict.
    const auto rhs =
        eval_on_periodic_grid(pde.expr, fine, dx / fine_factor, dx, registry);
    double err = 0.0;
    for (int i = 0; i < n; ++i) {
      const double pde_step = coarse[static_cast<std::size_t>(i)] +
                              dt * rhs[static_cast<std::size_t>(i * fine_factor)];
      err = std::max(err, std::abs(pde_step - ode_step[static_cast<std::size_t>(i)]));
    }
    errors.push_back(err);
    spacings.push_back(dx);
  }
  for (std::size_t i = 0; i + 1 < errors.size(); ++i) {
    const double slope = std::log(errors[i] / errors[i + 1]) /
                         std::log(spacings[i] / spacings[i + 1]);
    EXPECT_GE(slope, 1.7) << "refinement step " << i;
  }
}

TEST(PdeExpr, CanonicalisationMergesAndSorts) {
  const ExprPtr twice = expr_sum({expr_term(Rat(1, 2), 1, expr_deriv(1, expr_state())),
                                  expr_term(Rat(1, 2), 1, expr_deriv(1, expr_state()))});
  EXPECT_EQ(to_sexpr(twice), to_sexpr(expr_term(Rat(1), 1, expr_deriv(1, expr_state()))));
  const ExprPtr cancels = expr_sum({expr_term(Rat(1), 0, expr_state()),
                                    expr_term(Rat(-1), 0, expr_state())});
  EXPECT_EQ(to_sexpr(cancels), "0");
}

TEST(PdeExpr, CombinedOrderCountsCompositionPaths) {
  const ExprPtr nested = expr_deriv(1, expr_fn("sin", expr_deriv(1, expr_state())));
  EXPECT_EQ(combined_order(nested), 2);
}

TEST(Graph, CycleRejected) {
  // Hand-build a cyclic node list.
  std::vector<GraphNode> nodes(2);
  nodes[0].kind = GraphNode::Kind::Fn;
  nodes[0].fn = "sin";
  nodes[0].inputs = {{1, Rat(1)}};
  nodes[1].kind = GraphNode::Kind::Fn;
  nodes[1].fn = "cos";
  nodes[1].inputs = {{0, Rat(1)}};
  EXPECT_THROW(ComputationGraph(nodes, 0), validity_error);
}

}  // namespace
}  // namespace continuum
