#pragma once

// Space-dependent and unequally spaced linear systems: per-node continuation
// followed by fitting coefficient functions c_k(x) across node positions,
// either interpolating exactly or in the least-squares sense.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "continuum/rational.hpp"
#include "continuum/stencil.hpp"

namespace continuum {

// One node of d rho_i / dt = sum_j a_ij rho_{i+s_ij} + constant. Shifts index
// neighbouring array slots; the optional constant expresses boundary forcing.
struct SpaceDependentNode {
  Rat position = 0;
  std::vector<std::int64_t> shifts;
  std::vector<Rat> gains;
  Rat constant = 0;
};

struct SpaceDependentOde {
  std::vector<SpaceDependentNode> nodes;
  Rat dx = 1;  // nominal index spacing, used by the equally-spaced reading

  void validate() const {
    if (nodes.empty()) throw validity_error("system has no nodes");
    for (std::size_t i = 1; i < nodes.size(); ++i)
      if (!(nodes[i - 1].position < nodes[i].position))
        throw validity_error("node positions must be strictly increasing");
    for (const auto& n : nodes) {
      if (n.shifts.size() != n.gains.size())
        throw validity_error("per-node gains must align with shifts");
      for (std::size_t a = 0; a < n.shifts.size(); ++a)
        for (std::size_t b = a + 1; b < n.shifts.size(); ++b)
          if (n.shifts[a] == n.shifts[b])
            throw validity_error("per-node shifts must be distinct");
    }
  }
};

enum class FitMode { interpolation, least_squares };

// A fitted scalar function of position. Interpolation stores the barycentric
// form over all sample points (exact at nodes); least squares stores a
// polynomial in x of the configured degree.
class FittedFunction {
 public:
  static FittedFunction interpolating(std::vector<double> xs, std::vector<double> ys) {
    FittedFunction f;
    f.mode_ = FitMode::interpolation;
    f.xs_ = std::move(xs);
    f.ys_ = std::move(ys);
    f.weights_.assign(f.xs_.size(), 1.0);
    for (std::size_t j = 0; j < f.xs_.size(); ++j) {
      for (std::size_t k = 0; k < f.xs_.size(); ++k) {
        if (k == j) continue;
        f.weights_[j] /= (f.xs_[j] - f.xs_[k]);
      }
    }
    f.basis_ = "barycentric Lagrange, " + std::to_string(f.xs_.size()) + " nodes";
    f.residual_ = 0.0;
    return f;
  }

  static FittedFunction least_squares(const std::vector<double>& xs,
                                      const std::vector<double>& ys, int degree) {
    if (degree + 1 > static_cast<int>(xs.size()))
      throw validity_error("least-squares basis larger than sample count (rank " +
                           std::to_string(xs.size()) + ", need " +
                           std::to_string(degree + 1) + ")");
    FittedFunction f;
    f.mode_ = FitMode::least_squares;
    // Householder QR on the Vandermonde basis.
    const std::size_t m = xs.size(), n = static_cast<std::size_t>(degree) + 1;
    std::vector<std::vector<double>> a(m, std::vector<double>(n));
    for (std::size_t i = 0; i < m; ++i) {
      double p = 1.0;
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] = p;
        p *= xs[i];
      }
    }
    std::vector<double> b = ys;
    for (std::size_t col = 0; col < n; ++col) {
      double norm = 0.0;
      for (std::size_t i = col; i < m; ++i) norm += a[i][col] * a[i][col];
      norm = std::sqrt(norm);
      if (norm == 0.0)
        throw validity_error("least-squares basis is rank deficient at column " +
                             std::to_string(col));
      const double alpha = a[col][col] > 0 ? -norm : norm;
      std::vector<double> v(m, 0.0);
      v[col] = a[col][col] - alpha;
      for (std::size_t i = col + 1; i < m; ++i) v[i] = a[i][col];
      double vnorm2 = 0.0;
      for (std::size_t i = col; i < m; ++i) vnorm2 += v[i] * v[i];
      if (vnorm2 == 0.0) continue;
      for (std::size_t j = col; j < n; ++j) {
        double dot = 0.0;
        for (std::size_t i = col; i < m; ++i) dot += v[i] * a[i][j];
        const double s = 2.0 * dot / vnorm2;
        for (std::size_t i = col; i < m; ++i) a[i][j] -= s * v[i];
      }
      double dotb = 0.0;
      for (std::size_t i = col; i < m; ++i) dotb += v[i] * b[i];
      const double sb = 2.0 * dotb / vnorm2;
      for (std::size_t i = col; i < m; ++i) b[i] -= sb * v[i];
    }
    f.poly_.assign(n, 0.0);
    for (std::size_t row = n; row-- > 0;) {
      double acc = b[row];
      for (std::size_t k = row + 1; k < n; ++k) acc -= a[row][k] * f.poly_[k];
      f.poly_[row] = acc / a[row][row];
    }
    double res2 = 0.0;
    for (std::size_t i = n; i < m; ++i) res2 += b[i] * b[i];
    f.residual_ = std::sqrt(res2);
    f.basis_ = "polynomial degree " + std::to_string(degree);
    return f;
  }

  double operator()(double x) const {
    if (mode_ == FitMode::least_squares) {
      double acc = 0.0;
      for (std::size_t j = poly_.size(); j-- > 0;) acc = acc * x + poly_[j];
      return acc;
    }
    // Barycentric second form; exact at the nodes by construction.
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < xs_.size(); ++j) {
      const double d = x - xs_[j];
      if (d == 0.0) return ys_[j];
      const double w = weights_[j] / d;
      num += w * ys_[j];
      den += w;
    }
    return num / den;
  }

  FitMode mode() const { return mode_; }
  double residual() const { return residual_; }
  const std::string& basis() const { return basis_; }

 private:
  FitMode mode_ = FitMode::interpolation;
  std::vector<double> xs_, ys_, weights_;  // interpolation
  std::vector<double> poly_;               // least squares, ascending powers
  double residual_ = 0.0;
  std::string basis_;
};

// The continued space-dependent PDE: fitted coefficient functions c_k(x)
// plus the exact per-node samples they were built from.
struct CoefficientField {
  int order = 0;
  FitMode mode = FitMode::interpolation;
  bool absorbed_spacing = false;  // true for the unequally-spaced reading
  Rat dx = 1;
  std::vector<FittedFunction> per_order;   // index k = 0..order
  std::vector<std::vector<Rat>> nodal;     // nodal[i][k] = c_ik, exact
  std::vector<Rat> positions;              // node positions
};

namespace detail {

inline CoefficientField fit_field(const SpaceDependentOde& sys, int d, FitMode mode,
                                  int ls_degree, bool physical_offsets) {
  sys.validate();
  std::size_t max_neighbours = 0;
  for (const auto& n : sys.nodes) max_neighbours = std::max(max_neighbours, n.shifts.size());
  if (static_cast<std::size_t>(d) + 1 < max_neighbours)
    throw validity_error("continuation order must satisfy d + 1 >= N_i for all nodes");

  CoefficientField field;
  field.order = d;
  field.mode = mode;
  field.absorbed_spacing = physical_offsets;
  field.dx = sys.dx;
  const std::size_t count = sys.nodes.size();
  field.nodal.assign(count, std::vector<Rat>(static_cast<std::size_t>(d) + 1, Rat(0)));
  for (std::size_t i = 0; i < count; ++i) {
    const auto& node = sys.nodes[i];
    std::vector<Rat> offsets(node.shifts.size());
    for (std::size_t j = 0; j < node.shifts.size(); ++j) {
      if (physical_offsets) {
        const std::int64_t neighbour = static_cast<std::int64_t>(i) + node.shifts[j];
        if (neighbour < 0 || neighbour >= static_cast<std::int64_t>(count))
          throw validity_error("shift reaches outside the node list");
        offsets[j] = sys.nodes[static_cast<std::size_t>(neighbour)].position - node.position;
        if (offsets[j] == 0 && node.shifts[j] != 0)
          throw validity_error("coincident node positions");
      } else {
        offsets[j] = Rat(node.shifts[j]);
      }
    }
    field.nodal[i] = power_sum_coefficients(offsets, node.gains, d);
    field.positions.push_back(node.position);
  }

  std::vector<double> xs(count);
  for (std::size_t i = 0; i < count; ++i) xs[i] = to_double(sys.nodes[i].position);
  for (int k = 0; k <= d; ++k) {
    std::vector<double> ys(count);
    for (std::size_t i = 0; i < count; ++i)
      ys[i] = to_double(field.nodal[i][static_cast<std::size_t>(k)]);
    if (mode == FitMode::interpolation) {
      field.per_order.push_back(FittedFunction::interpolating(xs, ys));
    } else {
      const int degree =
          ls_degree >= 0 ? ls_degree : std::min<int>(static_cast<int>(count) - 1, 8);
      field.per_order.push_back(FittedFunction::least_squares(xs, ys, degree));
    }
  }
  return field;
}

}  // namespace detail

// Equally spaced, space-dependent gains: c_ik = sum_j a_ij s_ij^k, then a fit
// per derivative order. PDE reads sum_k c_k(x) dx^k / k! d^k rho/dx^k.
inline CoefficientField continue_space_dependent(const SpaceDependentOde& sys, int d,
                                                 FitMode mode = FitMode::interpolation,
                                                 int ls_degree = -1) {
  return detail::fit_field(sys, d, mode, ls_degree, false);
}

// Nonuniform spacing: offsets are true position differences, so the PDE
// reads sum_k c_k(x) / k! d^k rho/dx^k with no dx^k factor.
inline CoefficientField continue_unequally_spaced(const SpaceDependentOde& sys, int d,
                                                  FitMode mode = FitMode::interpolation,
                                                  int ls_degree = -1) {
  return detail::fit_field(sys, d, mode, ls_degree, true);
}

}  // namespace continuum
