#pragma once

// Computational-graph representation of nonlinear stencil dynamics: a DAG
// whose leaves are neighbour states rho_{i+s} and whose internal nodes apply
// a named one-variable function to a weighted sum of their inputs. The root
// computes the right-hand side of the node-i dynamics.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "continuum/rational.hpp"

namespace continuum {

struct GraphEdge {
  int node = -1;
  Rat weight = 1;
};

struct GraphNode {
  enum class Kind { Leaf, Fn };
  Kind kind = Kind::Leaf;
  Rat shift = 0;          // Leaf: lattice offset of the referenced state
  std::string fn;         // Fn: registry name of the one-variable function
  std::vector<GraphEdge> inputs;  // Fn only; weights are the summation gains
};

class ComputationGraph {
 public:
  ComputationGraph(std::vector<GraphNode> nodes, int root)
      : nodes_(std::move(nodes)), root_(root) {
    validate();
  }

  const GraphNode& node(int id) const { return nodes_.at(static_cast<std::size_t>(id)); }
  int root() const { return root_; }
  int size() const { return static_cast<int>(nodes_.size()); }

 private:
  void validate() const {
    if (nodes_.empty()) throw validity_error("graph has no nodes");
    if (root_ < 0 || root_ >= size()) throw validity_error("graph root out of range");
    // DAG check plus structural constraints, iterative DFS with colouring.
    std::vector<int> state(nodes_.size(), 0);
    std::vector<std::pair<int, std::size_t>> frames{{root_, 0}};
    while (!frames.empty()) {
      auto& [id, child] = frames.back();
      const GraphNode& n = nodes_[static_cast<std::size_t>(id)];
      if (n.kind == GraphNode::Kind::Leaf && !n.inputs.empty())
        throw validity_error("leaf node carries inputs");
      if (n.kind == GraphNode::Kind::Fn && n.inputs.empty())
        throw validity_error("function node has no inputs");
      if (state[static_cast<std::size_t>(id)] == 0) state[static_cast<std::size_t>(id)] = 1;
      if (child < n.inputs.size()) {
        const int next = n.inputs[child].node;
        ++child;
        if (next < 0 || next >= size()) throw validity_error("edge references unknown node");
        if (state[static_cast<std::size_t>(next)] == 1)
          throw validity_error("graph contains a cycle");
        if (state[static_cast<std::size_t>(next)] == 0) frames.emplace_back(next, 0);
      } else {
        state[static_cast<std::size_t>(id)] = 2;
        frames.pop_back();
      }
    }
  }

  std::vector<GraphNode> nodes_;
  int root_;
};

// Convenience builder used by tests and the JSON loader.
class GraphBuilder {
 public:
  int leaf(Rat shift) {
    GraphNode n;
    n.kind = GraphNode::Kind::Leaf;
    n.shift = std::move(shift);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int fn(std::string name, std::vector<GraphEdge> inputs) {
    GraphNode n;
    n.kind = GraphNode::Kind::Fn;
    n.fn = std::move(name);
    n.inputs = std::move(inputs);
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  ComputationGraph build(int root) const { return ComputationGraph(nodes_, root); }

 private:
  std::vector<GraphNode> nodes_;
};

namespace detail {

// Key describing a subgraph's structure with leaf shifts normalised relative
// to the first leaf met in DFS order. Two subgraphs are similar exactly when
// their keys coincide; the difference of their first-leaf shifts is the
// class offset. Edges are sorted inside the key so input order is
// irrelevant.
struct SubgraphShape {
  std::string key;
  bool has_leaf = false;
  Rat first_leaf_shift = 0;
};

inline SubgraphShape subgraph_shape(const ComputationGraph& g, int id) {
  const GraphNode& n = g.node(id);
  SubgraphShape shape;
  if (n.kind == GraphNode::Kind::Leaf) {
    shape.key = "leaf";
    shape.has_leaf = true;
    shape.first_leaf_shift = n.shift;
    return shape;
  }
  std::vector<SubgraphShape> child_shapes;
  child_shapes.reserve(n.inputs.size());
  for (const GraphEdge& e : n.inputs) child_shapes.push_back(subgraph_shape(g, e.node));
  // Anchor: the first child (in input order) that contains a leaf.
  for (const auto& c : child_shapes) {
    if (c.has_leaf) {
      shape.has_leaf = true;
      shape.first_leaf_shift = c.first_leaf_shift;
      break;
    }
  }
  std::vector<std::string> parts;
  parts.reserve(child_shapes.size());
  for (std::size_t i = 0; i < child_shapes.size(); ++i) {
    const auto& c = child_shapes[i];
    const Rat rel = c.has_leaf && shape.has_leaf ? c.first_leaf_shift - shape.first_leaf_shift
                                                 : Rat(0);
    parts.push_back("(" + c.key + " @" + rat_to_string(rel) + " w" +
                    rat_to_string(n.inputs[i].weight) + ")");
  }
  std::sort(parts.begin(), parts.end());
  shape.key = n.fn + "[";
  for (const auto& p : parts) shape.key += p;
  shape.key += "]";
  return shape;
}

}  // namespace detail

struct SubgraphClassMember {
  int node = -1;   // subgraph root id
  Rat offset = 0;  // single shift relative to the class representative
  Rat weight = 1;  // edge weight into the parent (the combination gain)
};

// Equivalence class of similar subgraphs feeding one parent node.
struct SubgraphClass {
  int parent = -1;
  std::string shape_key;
  std::vector<SubgraphClassMember> members;  // ordered by offset ascending
};

// Partitions every internal node's inputs into similarity classes. Classes
// are reported in DFS order of their parent, ordered by minimal member
// shift; members carry offsets relative to the minimal-shift member.
inline std::vector<SubgraphClass> find_similar_subgraphs(const ComputationGraph& g) {
  std::vector<SubgraphClass> classes;
  std::vector<bool> visited(static_cast<std::size_t>(g.size()), false);
  std::function<void(int)> visit = [&](int id) {
    if (visited[static_cast<std::size_t>(id)]) return;
    visited[static_cast<std::size_t>(id)] = true;
    const GraphNode& n = g.node(id);
    if (n.kind == GraphNode::Kind::Leaf) return;
    std::map<std::string, SubgraphClass> buckets;
    for (const GraphEdge& e : n.inputs) {
      const detail::SubgraphShape shape = detail::subgraph_shape(g, e.node);
      SubgraphClass& cls = buckets[shape.key];
      cls.parent = id;
      cls.shape_key = shape.key;
      cls.members.push_back({e.node, shape.first_leaf_shift, e.weight});
    }
    std::vector<SubgraphClass> local;
    for (auto& [key, cls] : buckets) {
      std::sort(cls.members.begin(), cls.members.end(),
                [](const SubgraphClassMember& a, const SubgraphClassMember& b) {
                  return a.offset < b.offset;
                });
      const Rat base = cls.members.front().offset;
      for (auto& m : cls.members) m.offset -= base;
      local.push_back(std::move(cls));
    }
    std::sort(local.begin(), local.end(), [&](const SubgraphClass& a, const SubgraphClass& b) {
      return a.shape_key < b.shape_key;
    });
    for (auto& c : local) classes.push_back(std::move(c));
    for (const GraphEdge& e : n.inputs) visit(e.node);
  };
  visit(g.root());
  return classes;
}

// Position of every subgraph: a leaf sits at its shift, an internal node at
// the average of its descendant leaves' positions, and the root is pinned to
// 0 (the node-i evaluation point).
inline std::map<int, Rat> assign_positions(const ComputationGraph& g) {
  std::map<int, Rat> positions;
  // (sum of leaf positions, leaf count) per node, counted with multiplicity.
  std::function<std::pair<Rat, std::int64_t>(int)> walk =
      [&](int id) -> std::pair<Rat, std::int64_t> {
    const GraphNode& n = g.node(id);
    if (n.kind == GraphNode::Kind::Leaf) {
      positions[id] = n.shift;
      return {n.shift, 1};
    }
    Rat sum = 0;
    std::int64_t count = 0;
    for (const GraphEdge& e : n.inputs) {
      auto [s, c] = walk(e.node);
      sum += s;
      count += c;
    }
    positions[id] = count > 0 ? sum / count : Rat(0);
    return {sum, count};
  };
  walk(g.root());
  positions[g.root()] = 0;
  return positions;
}

// Structural equality in the sense of root expressions: same function at the
// root and mutually matching child structures, ignoring leaf shifts and edge
// weights.
inline bool same_structure(const ComputationGraph& g1, const ComputationGraph& g2) {
  std::function<bool(int, int)> match = [&](int a, int b) -> bool {
    const GraphNode& na = g1.node(a);
    const GraphNode& nb = g2.node(b);
    if (na.kind != nb.kind) return false;
    if (na.kind == GraphNode::Kind::Leaf) return true;
    if (na.fn != nb.fn) return false;
    for (const GraphEdge& ea : na.inputs) {
      bool found = false;
      for (const GraphEdge& eb : nb.inputs)
        if (match(ea.node, eb.node)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    for (const GraphEdge& eb : nb.inputs) {
      bool found = false;
      for (const GraphEdge& ea : na.inputs)
        if (match(ea.node, eb.node)) {
          found = true;
          break;
        }
      if (!found) return false;
    }
    return true;
  };
  return match(g1.root(), g2.root());
}

namespace detail {

inline int copy_subtree(const ComputationGraph& src, int id, GraphBuilder& dst) {
  const GraphNode& n = src.node(id);
  if (n.kind == GraphNode::Kind::Leaf) return dst.leaf(n.shift);
  std::vector<GraphEdge> inputs;
  inputs.reserve(n.inputs.size());
  for (const GraphEdge& e : n.inputs)
    inputs.push_back({copy_subtree(src, e.node, dst), e.weight});
  return dst.fn(n.fn, std::move(inputs));
}

}  // namespace detail

// Padding normalisation: when two graphs disagree at the root, rebuild each
// with a fresh identity root computing 1*own + 0*other, after which
// same_structure holds by construction. Opt-in; padding arbitrary systems
// into a common structure is not always meaningful.
inline std::pair<ComputationGraph, ComputationGraph> pad_to_same_structure(
    const ComputationGraph& g1, const ComputationGraph& g2) {
  if (same_structure(g1, g2)) return {g1, g2};
  GraphBuilder b1;
  const int own1 = detail::copy_subtree(g1, g1.root(), b1);
  const int other1 = detail::copy_subtree(g2, g2.root(), b1);
  const int root1 = b1.fn("identity", {{own1, Rat(1)}, {other1, Rat(0)}});
  GraphBuilder b2;
  const int other2 = detail::copy_subtree(g1, g1.root(), b2);
  const int own2 = detail::copy_subtree(g2, g2.root(), b2);
  const int root2 = b2.fn("identity", {{other2, Rat(0)}, {own2, Rat(1)}});
  return {b1.build(root1), b2.build(root2)};
}

}  // namespace continuum
