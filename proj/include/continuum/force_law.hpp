#pragma once

// Pairwise radial force between particles: F(y) = y * phi(|y|) with
// phi(s) = f(s)/s. The magnitude must decay fast enough that the cumulative
// force from an infinite lattice stays finite:
//   integral_eps^inf s^{n-1} f(s) ds < inf  for every eps > 0.

#include <cmath>
#include <functional>
#include <string>

#include "continuum/rational.hpp"

namespace continuum {

struct DecayCheck {
  bool converged = false;
  double integral = 0.0;    // integral over [eps, last segment end]
  double tail_estimate = 0.0;
  double last_segment = 0.0;
  int segments = 0;
};

class ForceLaw {
 public:
  ForceLaw(std::string name, std::function<double(double)> magnitude)
      : name_(std::move(name)), f_(std::move(magnitude)) {}

  double f(double s) const { return f_(s); }
  double phi(double s) const { return f_(s) / s; }
  const std::string& name() const { return name_; }

  // Numeric check of the decay condition for dimension n: composite Simpson
  // over geometric segments [2^k, 2^{k+1}]; converged when the segment
  // contributions shrink geometrically. `moment` selects the power of s
  // (n-1 for the force condition itself, n for the pressure-series tail).
  DecayCheck verify_decay(int n, double eps = 1e-3, int moment_offset = -1) const {
    DecayCheck check;
    const int moment = n + moment_offset;
    auto segment_integral = [&](double a, double b) {
      const int steps = 256;
      const double h = (b - a) / steps;
      double acc = 0.0;
      for (int i = 0; i < steps; ++i) {
        const double x0 = a + i * h, x1 = x0 + h, xm = x0 + 0.5 * h;
        acc += (h / 6.0) * (std::pow(x0, moment) * std::abs(f_(x0)) +
                            4.0 * std::pow(xm, moment) * std::abs(f_(xm)) +
                            std::pow(x1, moment) * std::abs(f_(x1)));
      }
      return acc;
    };
    double total = segment_integral(eps, 2.0);
    double prev = total;
    double ratio = 1.0;
    for (int k = 1; k <= 24; ++k) {
      const double a = std::ldexp(1.0, k);
      const double seg = segment_integral(a, 2.0 * a);
      total += seg;
      check.segments = k;
      check.last_segment = seg;
      if (seg < 1e-300) {
        ratio = 0.0;
        break;
      }
      ratio = seg / prev;
      prev = seg;
      if (k >= 4 && ratio < 0.75 && seg < 1e-12 * std::max(total, 1.0)) break;
    }
    check.integral = total;
    if (ratio < 0.9) {
      check.converged = true;
      check.tail_estimate = ratio > 0 ? check.last_segment * ratio / (1.0 - ratio) : 0.0;
    }
    return check;
  }

  static ForceLaw exponential() {
    return ForceLaw("exp(-s)", [](double s) { return std::exp(-s); });
  }

  // Linear spring around rest length 1; useful for chain dispersion tests.
  static ForceLaw spring() {
    return ForceLaw("1-s", [](double s) { return 1.0 - s; });
  }

  static ForceLaw inverse_power(double p) {
    return ForceLaw("s^-" + std::to_string(p), [p](double s) { return std::pow(s, -p); });
  }

 private:
  std::string name_;
  std::function<double(double)> f_;
};

}  // namespace continuum
