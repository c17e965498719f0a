#pragma once

// Recursive continuation of a computational graph to a symbolic PDE.
// Each similarity class of a node's inputs is a linear combination of one
// subexpression sampled at shifted positions; that combination is replaced
// by its continuation (a weighted stack of spatial derivatives) evaluated at
// the parent's position. Recursion starts from the leaves.

#include <map>
#include <optional>
#include <vector>

#include "continuum/graph.hpp"
#include "continuum/pde_expr.hpp"
#include "continuum/rational.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

struct GraphContinuationOptions {
  // Order of accuracy per similarity class, keyed by discovery order of
  // find_similar_subgraphs; classes without an entry use the default.
  int default_accuracy = 0;
  std::map<std::size_t, int> per_class_accuracy;
  // When set, composite terms whose summed derivative order along a path
  // exceeds the cap are dropped from the result.
  std::optional<int> total_order_cap;
};

// A symbolic PDE together with the lattice spacing its dx powers stand for.
struct GraphPde {
  ExprPtr expr;
  Rat dx = 1;
};

inline GraphPde continue_graph(const ComputationGraph& g, const Rat& dx,
                               const GraphContinuationOptions& options = {}) {
  if (dx <= 0) throw validity_error("dx must be positive");
  const std::map<int, Rat> positions = assign_positions(g);
  const std::vector<SubgraphClass> classes = find_similar_subgraphs(g);
  std::map<int, std::vector<const SubgraphClass*>> classes_by_parent;
  std::map<const SubgraphClass*, std::size_t> class_index;
  for (std::size_t i = 0; i < classes.size(); ++i) {
    classes_by_parent[classes[i].parent].push_back(&classes[i]);
    class_index[&classes[i]] = i;
  }

  std::function<ExprPtr(int)> continue_node = [&](int id) -> ExprPtr {
    const GraphNode& node = g.node(id);
    if (node.kind == GraphNode::Kind::Leaf) return expr_state();
    const Rat parent_position = positions.at(id);
    std::vector<ExprPtr> contributions;
    for (const SubgraphClass* cls : classes_by_parent.at(id)) {
      // The class members share one continued subexpression.
      const ExprPtr body = continue_node(cls->members.front().node);
      std::vector<Rat> offsets;
      std::vector<Rat> gains;
      offsets.reserve(cls->members.size());
      for (const SubgraphClassMember& m : cls->members) {
        offsets.push_back(positions.at(m.node) - parent_position);
        gains.push_back(m.weight);
      }
      for (std::size_t a = 0; a < offsets.size(); ++a)
        for (std::size_t b = a + 1; b < offsets.size(); ++b)
          if (offsets[a] == offsets[b])
            throw validity_error(
                "similar-subgraph class has coincident positions; "
                "shift structure is indeterminate");
      int accuracy = options.default_accuracy;
      if (auto it = options.per_class_accuracy.find(class_index.at(cls));
          it != options.per_class_accuracy.end())
        accuracy = it->second;
      if (accuracy < 0) throw std::invalid_argument("accuracy must be >= 0");
      const int order = static_cast<int>(offsets.size()) - 1 + accuracy;
      const std::vector<Rat> coeffs = power_sum_coefficients(offsets, gains, order);
      for (int k = 0; k <= order; ++k) {
        const Rat& c = coeffs[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        contributions.push_back(
            expr_term(c / rat_factorial(k), k, k == 0 ? body : expr_deriv(k, body)));
      }
    }
    const ExprPtr argument = expr_sum(std::move(contributions));
    if (node.fn == "identity") return argument;
    return expr_fn(node.fn, argument);
  };

  ExprPtr result = continue_node(g.root());
  if (options.total_order_cap) result = drop_above_order(result, *options.total_order_cap);
  return {canonical(result), dx};
}

}  // namespace continuum
