#pragma once

// Symbolic PDE expressions produced by graph continuation: sums of
// rational * dx^p scaled cores, where a core is the state, a spatial
// derivative of a subexpression, or a named one-variable function applied
// to a subexpression.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "continuum/rational.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

struct PdeExpr;
using ExprPtr = std::shared_ptr<const PdeExpr>;

struct PdeExpr {
  enum class Kind { State, Derivative, Fn, Term, Sum };

  Kind kind = Kind::State;
  int deriv_order = 0;        // Derivative
  std::string fn_name;        // Fn
  Rat coeff = 1;              // Term: coeff * dx^dx_power * child
  int dx_power = 0;           // Term
  std::vector<ExprPtr> children;
};

inline ExprPtr expr_state() {
  auto e = std::make_shared<PdeExpr>();
  e->kind = PdeExpr::Kind::State;
  return e;
}

inline ExprPtr expr_deriv(int order, ExprPtr child) {
  if (order < 0) throw std::invalid_argument("derivative order must be >= 0");
  auto e = std::make_shared<PdeExpr>();
  e->kind = PdeExpr::Kind::Derivative;
  e->deriv_order = order;
  e->children = {std::move(child)};
  return e;
}

inline ExprPtr expr_fn(std::string name, ExprPtr child) {
  auto e = std::make_shared<PdeExpr>();
  e->kind = PdeExpr::Kind::Fn;
  e->fn_name = std::move(name);
  e->children = {std::move(child)};
  return e;
}

inline ExprPtr expr_term(Rat coeff, int dx_power, ExprPtr child) {
  auto e = std::make_shared<PdeExpr>();
  e->kind = PdeExpr::Kind::Term;
  e->coeff = std::move(coeff);
  e->dx_power = dx_power;
  e->children = {std::move(child)};
  return e;
}

inline ExprPtr expr_sum(std::vector<ExprPtr> terms) {
  auto e = std::make_shared<PdeExpr>();
  e->kind = PdeExpr::Kind::Sum;
  e->children = std::move(terms);
  return e;
}

inline ExprPtr expr_zero() { return expr_sum({}); }

// Sum of derivative orders along the deepest composition path, e.g.
// d/dx [ sin(d rho/dx) ] has combined order 2.
inline int combined_order(const ExprPtr& e) {
  switch (e->kind) {
    case PdeExpr::Kind::State:
      return 0;
    case PdeExpr::Kind::Derivative:
      return e->deriv_order + combined_order(e->children[0]);
    case PdeExpr::Kind::Fn:
    case PdeExpr::Kind::Term:
      return combined_order(e->children[0]);
    case PdeExpr::Kind::Sum: {
      int m = 0;
      for (const auto& c : e->children) m = std::max(m, combined_order(c));
      return m;
    }
  }
  return 0;
}

// Drops every additive term whose composition path would exceed the given
// derivative-order budget.
inline ExprPtr drop_above_order(const ExprPtr& e, int budget) {
  if (budget < 0) return expr_zero();
  switch (e->kind) {
    case PdeExpr::Kind::State:
      return e;
    case PdeExpr::Kind::Derivative: {
      if (e->deriv_order > budget) return expr_zero();
      ExprPtr inner = drop_above_order(e->children[0], budget - e->deriv_order);
      if (inner->kind == PdeExpr::Kind::Sum && inner->children.empty()) return expr_zero();
      return expr_deriv(e->deriv_order, inner);
    }
    case PdeExpr::Kind::Fn:
      return expr_fn(e->fn_name, drop_above_order(e->children[0], budget));
    case PdeExpr::Kind::Term: {
      ExprPtr inner = drop_above_order(e->children[0], budget);
      if (inner->kind == PdeExpr::Kind::Sum && inner->children.empty()) return expr_zero();
      return expr_term(e->coeff, e->dx_power, inner);
    }
    case PdeExpr::Kind::Sum: {
      std::vector<ExprPtr> kept;
      for (const auto& c : e->children) {
        ExprPtr t = drop_above_order(c, budget);
        if (!(t->kind == PdeExpr::Kind::Sum && t->children.empty())) kept.push_back(t);
      }
      return expr_sum(std::move(kept));
    }
  }
  return e;
}

namespace detail {

struct NormalTerm {
  Rat coeff = 1;
  int dx_power = 0;
  ExprPtr core;  // State, Derivative or Fn over a canonical child
};

inline ExprPtr canonicalize(const ExprPtr& e);

inline void collect_terms(const ExprPtr& e, Rat coeff, int dx_power,
                          std::vector<NormalTerm>& out) {
  switch (e->kind) {
    case PdeExpr::Kind::Sum:
      for (const auto& c : e->children) collect_terms(c, coeff, dx_power, out);
      return;
    case PdeExpr::Kind::Term:
      collect_terms(e->children[0], coeff * e->coeff, dx_power + e->dx_power, out);
      return;
    case PdeExpr::Kind::Derivative: {
      // Merge nested derivatives and elide order 0.
      ExprPtr inner = canonicalize(e->children[0]);
      int order = e->deriv_order;
      // A derivative of a sum distributes.
      if (inner->kind == PdeExpr::Kind::Sum) {
        for (const auto& t : inner->children)
          collect_terms(expr_deriv(order, t), coeff, dx_power, out);
        return;
      }
      Rat c2 = coeff;
      int p2 = dx_power;
      if (inner->kind == PdeExpr::Kind::Term) {
        c2 *= inner->coeff;
        p2 += inner->dx_power;
        inner = inner->children[0];
      }
      while (inner->kind == PdeExpr::Kind::Derivative) {
        order += inner->deriv_order;
        inner = inner->children[0];
      }
      if (order == 0) {
        collect_terms(inner, c2, p2, out);
      } else {
        out.push_back({c2, p2, expr_deriv(order, inner)});
      }
      return;
    }
    case PdeExpr::Kind::Fn: {
      if (e->fn_name == "identity") {
        collect_terms(e->children[0], coeff, dx_power, out);
        return;
      }
      out.push_back({coeff, dx_power, expr_fn(e->fn_name, canonicalize(e->children[0]))});
      return;
    }
    case PdeExpr::Kind::State:
      out.push_back({coeff, dx_power, e});
      return;
  }
}

inline std::string sexpr_of(const ExprPtr& e);

inline ExprPtr canonicalize(const ExprPtr& e) {
  std::vector<NormalTerm> terms;
  collect_terms(e, Rat(1), 0, terms);
  // Merge terms sharing (dx_power, core).
  std::map<std::pair<int, std::string>, NormalTerm> merged;
  for (auto& t : terms) {
    if (t.coeff == 0) continue;
    auto key = std::make_pair(t.dx_power, sexpr_of(t.core));
    auto it = merged.find(key);
    if (it == merged.end())
      merged.emplace(std::move(key), t);
    else
      it->second.coeff += t.coeff;
  }
  std::vector<NormalTerm> kept;
  for (auto& [key, t] : merged)
    if (t.coeff != 0) kept.push_back(t);
  std::sort(kept.begin(), kept.end(), [](const NormalTerm& a, const NormalTerm& b) {
    const int oa = combined_order(a.core), ob = combined_order(b.core);
    if (oa != ob) return oa < ob;
    if (a.dx_power != b.dx_power) return a.dx_power < b.dx_power;
    return sexpr_of(a.core) < sexpr_of(b.core);
  });
  std::vector<ExprPtr> out;
  out.reserve(kept.size());
  for (auto& t : kept) {
    if (t.coeff == 1 && t.dx_power == 0)
      out.push_back(t.core);
    else
      out.push_back(expr_term(t.coeff, t.dx_power, t.core));
  }
  if (out.size() == 1) return out[0];
  return expr_sum(std::move(out));
}

inline std::string sexpr_of(const ExprPtr& e) {
  switch (e->kind) {
    case PdeExpr::Kind::State:
      return "rho";
    case PdeExpr::Kind::Derivative:
      return "(d^" + std::to_string(e->deriv_order) + " " + sexpr_of(e->children[0]) + ")";
    case PdeExpr::Kind::Fn:
      return "(" + e->fn_name + " " + sexpr_of(e->children[0]) + ")";
    case PdeExpr::Kind::Term:
      return "(* " + rat_to_string(e->coeff) + " dx^" + std::to_string(e->dx_power) + " " +
             sexpr_of(e->children[0]) + ")";
    case PdeExpr::Kind::Sum: {
      if (e->children.empty()) return "0";
      std::string s = "(+";
      for (const auto& c : e->children) s += " " + sexpr_of(c);
      return s + ")";
    }
  }
  return "?";
}

}  // namespace detail

// Canonical form: sums flattened, nested scalings folded, identity elided,
// like terms merged, terms sorted by (combined order, dx power, body).
// Golden tests compare the canonical s-expression byte for byte.
inline ExprPtr canonical(const ExprPtr& e) { return detail::canonicalize(e); }

inline std::string to_sexpr(const ExprPtr& e) { return detail::sexpr_of(canonical(e)); }

inline bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  return to_sexpr(a) == to_sexpr(b);
}

namespace detail {

inline std::string unicode_of(const ExprPtr& e) {
  switch (e->kind) {
    case PdeExpr::Kind::State:
      return "ρ";  // rho
    case PdeExpr::Kind::Derivative: {
      const std::string inner = unicode_of(e->children[0]);
      const std::string op =
          e->deriv_order == 1 ? "∂/∂x"
                              : "∂^" + std::to_string(e->deriv_order) + "/∂x^" +
                                    std::to_string(e->deriv_order);
      if (e->children[0]->kind == PdeExpr::Kind::State)
        return e->deriv_order == 1
                   ? "∂ρ/∂x"
                   : "∂^" + std::to_string(e->deriv_order) + "ρ/∂x^" +
                         std::to_string(e->deriv_order);
      return op + "[" + inner + "]";
    }
    case PdeExpr::Kind::Fn:
      return e->fn_name + "(" + unicode_of(e->children[0]) + ")";
    case PdeExpr::Kind::Term: {
      std::string prefix;
      if (e->coeff != 1) prefix += rat_to_string(e->coeff) + "·";
      if (e->dx_power == 1)
        prefix += "Δx·";
      else if (e->dx_power != 0)
        prefix += "Δx^" + std::to_string(e->dx_power) + "·";
      return prefix + unicode_of(e->children[0]);
    }
    case PdeExpr::Kind::Sum: {
      if (e->children.empty()) return "0";
      std::string s;
      for (std::size_t i = 0; i < e->children.size(); ++i) {
        if (i) s += " + ";
        s += unicode_of(e->children[i]);
      }
      return s;
    }
  }
  return "?";
}

}  // namespace detail

inline std::string to_unicode(const ExprPtr& e) { return detail::unicode_of(canonical(e)); }

// Named one-variable functions available to graph nodes. The registry keys
// the evaluation callbacks used by the numeric consistency checks.
class FunctionRegistry {
 public:
  static FunctionRegistry standard() {
    FunctionRegistry r;
    r.add("identity", [](double v) { return v; });
    r.add("sin", [](double v) { return std::sin(v); });
    r.add("cos", [](double v) { return std::cos(v); });
    r.add("exp", [](double v) { return std::exp(v); });
    r.add("tanh", [](double v) { return std::tanh(v); });
    r.add("power(2)", [](double v) { return v * v; });
    r.add("power(3)", [](double v) { return v * v * v; });
    return r;
  }

  void add(std::string name, std::function<double(double)> fn) {
    fns_[std::move(name)] = std::move(fn);
  }

  const std::function<double(double)>& lookup(const std::string& name) const {
    auto it = fns_.find(name);
    if (it == fns_.end()) throw validity_error("unknown function '" + name + "'");
    return it->second;
  }

  bool contains(const std::string& name) const { return fns_.count(name) != 0; }

 private:
  std::map<std::string, std::function<double(double)>> fns_;
};

// Evaluates the expression on a periodic 1D grid of the given spacing.
// grid_h is the evaluation grid step; dx_symbol is the value substituted for
// the symbolic lattice spacing carried by the expression's dx powers.
// Spatial derivatives use central finite differences on the grid.
inline std::vector<double> eval_on_periodic_grid(const ExprPtr& expr,
                                                 const std::vector<double>& values,
                                                 double grid_h, double dx_symbol,
                                                 const FunctionRegistry& registry) {
  const std::size_t n = values.size();
  auto wrap = [&](std::int64_t i) -> std::size_t {
    std::int64_t m = i % static_cast<std::int64_t>(n);
    if (m < 0) m += static_cast<std::int64_t>(n);
    return static_cast<std::size_t>(m);
  };
  std::function<std::vector<double>(const ExprPtr&)> eval = [&](const ExprPtr& e) {
    switch (e->kind) {
      case PdeExpr::Kind::State:
        return values;
      case PdeExpr::Kind::Term: {
        std::vector<double> v = eval(e->children[0]);
        const double scale = to_double(e->coeff) * std::pow(dx_symbol, e->dx_power);
        for (double& x : v) x *= scale;
        return v;
      }
      case PdeExpr::Kind::Fn: {
        std::vector<double> v = eval(e->children[0]);
        const auto& f = registry.lookup(e->fn_name);
        for (double& x : v) x = f(x);
        return v;
      }
      case PdeExpr::Kind::Sum: {
        std::vector<double> acc(n, 0.0);
        for (const auto& c : e->children) {
          std::vector<double> v = eval(c);
          for (std::size_t i = 0; i < n; ++i) acc[i] += v[i];
        }
        return acc;
      }
      case PdeExpr::Kind::Derivative: {
        std::vector<double> v = eval(e->children[0]);
        const int k = e->deriv_order;
        if (k == 0) return v;
        const int r = (k + 1) / 2;  // smallest symmetric stencil with N > k
        std::vector<std::int64_t> shifts;
        for (int s = -r; s <= r; ++s) shifts.push_back(s);
        const std::vector<Rat> weights =
            discretize_derivative({k, Stencil(shifts), Rat(1)});
        std::vector<double> w(weights.size());
        for (std::size_t i = 0; i < w.size(); ++i)
          w[i] = to_double(weights[i]) / std::pow(grid_h, k);
        std::vector<double> out(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
          double acc = 0.0;
          for (std::size_t j = 0; j < shifts.size(); ++j)
            acc += w[j] * v[wrap(static_cast<std::int64_t>(i) + shifts[j])];
          out[i] = acc;
        }
        return out;
      }
    }
    return std::vector<double>(n, 0.0);
  };
  return eval(expr);
}

}  // namespace continuum
