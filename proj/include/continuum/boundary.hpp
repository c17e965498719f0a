#pragma once

// Ghost-cell recovery of boundary conditions: a boundary row that differs
// from the interior template only through missing neighbours is explained by
// an algebraic ghost state; the ghost relation continualises to the PDE
// boundary condition and is classified by shape.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "continuum/rational.hpp"
#include "continuum/space_dependent.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

enum class BoundaryKind { Dirichlet, Neumann, Robin, Unclassified };

inline const char* boundary_kind_name(BoundaryKind k) {
  switch (k) {
    case BoundaryKind::Dirichlet: return "Dirichlet";
    case BoundaryKind::Neumann: return "Neumann";
    case BoundaryKind::Robin: return "Robin";
    case BoundaryKind::Unclassified: return "Unclassified";
  }
  return "?";
}

// rho_ghost = constant + sum_v weights[v] * rho_v over interior states v.
struct GhostRelation {
  std::int64_t ghost_index = 0;
  std::int64_t boundary_node = 0;
  Rat constant = 0;
  std::map<std::int64_t, Rat> weights;
  BoundaryKind kind = BoundaryKind::Unclassified;
};

struct BoundarySpec {
  std::vector<GhostRelation> ghosts;
};

namespace detail {

inline BoundaryKind classify_ghost(const GhostRelation& g) {
  std::size_t nonzero = 0;
  bool unit = false;
  for (const auto& [state, w] : g.weights) {
    if (w == 0) continue;
    ++nonzero;
    unit = (w == 1);
  }
  if (nonzero == 0) return BoundaryKind::Dirichlet;
  if (nonzero == 1) return unit ? BoundaryKind::Neumann : BoundaryKind::Robin;
  return BoundaryKind::Unclassified;
}

}  // namespace detail

// Recovers ghost relations for every node of the system whose row deviates
// from the interior template. Nodes are identified with array slots
// 0..n-1; a template shift falling outside that range is the missing
// neighbour the ghost stands for. Supports one missing neighbour per row;
// rows missing several neighbours are reported irreconcilable.
inline BoundarySpec extract_boundary(const SpaceDependentOde& sys,
                                     const LinearOdeSpec& interior) {
  sys.validate();
  const std::int64_t count = static_cast<std::int64_t>(sys.nodes.size());
  BoundarySpec spec;
  for (std::int64_t i = 0; i < count; ++i) {
    const SpaceDependentNode& node = sys.nodes[static_cast<std::size_t>(i)];
    // Row as a map lattice-index -> gain.
    std::map<std::int64_t, Rat> row;
    for (std::size_t j = 0; j < node.shifts.size(); ++j) {
      const std::int64_t target = i + node.shifts[j];
      if (target < 0 || target >= count)
        throw validity_error("boundary row references a state outside the system");
      row[target] += node.gains[j];
    }
    for (auto it = row.begin(); it != row.end();) {
      if (it->second == 0)
        it = row.erase(it);
      else
        ++it;
    }

    std::vector<std::int64_t> missing;
    for (std::size_t j = 0; j < interior.size(); ++j) {
      const std::int64_t target = i + interior.stencil.shift(j);
      if (target < 0 || target >= count) missing.push_back(target);
    }

    if (missing.empty()) {
      // Interior row: must match the template exactly, no ghost emitted.
      std::map<std::int64_t, Rat> expected;
      for (std::size_t j = 0; j < interior.size(); ++j)
        expected[i + interior.stencil.shift(j)] += interior.gains[j];
      bool matches = node.constant == 0 && row.size() == expected.size();
      if (matches)
        for (const auto& [state, gain] : expected)
          if (!row.count(state) || row.at(state) != gain) {
            matches = false;
            break;
          }
      if (!matches)
        throw validity_error("interior row " + std::to_string(i) +
                             " does not match the interior template");
      continue;
    }
    if (missing.size() > 1)
      throw validity_error("irreconcilable boundary: row " + std::to_string(i) +
                           " is missing " + std::to_string(missing.size()) +
                           " neighbours; only single-ghost rows are supported");

    const std::int64_t ghost = missing.front();
    Rat a_miss = 0;
    std::map<std::int64_t, Rat> expected;
    for (std::size_t j = 0; j < interior.size(); ++j) {
      const std::int64_t target = i + interior.stencil.shift(j);
      if (target == ghost)
        a_miss = interior.gains[j];
      else
        expected[target] += interior.gains[j];
    }
    if (a_miss == 0) {
      // The missing point carries zero template gain; the row must already
      // match and no ghost information is recoverable.
      throw validity_error("boundary row " + std::to_string(i) +
                           " misses a neighbour the template does not use");
    }

    GhostRelation relation;
    relation.ghost_index = ghost;
    relation.boundary_node = i;
    relation.constant = node.constant / a_miss;
    // Substituting rho_ghost = const + sum w_v rho_v into the template must
    // reproduce the row: row_v = expected_v + a_miss * w_v.
    std::map<std::int64_t, Rat> states;
    for (const auto& [state, gain] : row) states[state] = gain;
    for (const auto& [state, gain] : expected)
      if (!states.count(state)) states[state] = 0;
    for (const auto& [state, gain] : states) {
      const Rat base = expected.count(state) ? expected.at(state) : Rat(0);
      const Rat w = (gain - base) / a_miss;
      if (w != 0) relation.weights[state] = w;
    }
    relation.kind = detail::classify_ghost(relation);
    spec.ghosts.push_back(std::move(relation));
  }
  return spec;
}

}  // namespace continuum
