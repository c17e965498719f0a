#pragma once

// Exact rational scalar type used throughout the stencil algebra. Integer
// lattice shifts keep every Vandermonde solve exact; doubles appear only at
// the spectral/simulation boundary.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace continuum {

using BigInt = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

// Raised when an operation violates a validity constraint (e.g. the d+1 >= N
// requirement for continuations, malformed input files, degenerate stencils).
class validity_error : public std::runtime_error {
 public:
  explicit validity_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a simulation trips its divergence guard.
class divergence_error : public std::runtime_error {
 public:
  explicit divergence_error(const std::string& what) : std::runtime_error(what) {}
};

// Parses "p", "-p" or "p/q". Whitespace is not accepted.
inline Rat rat_from_string(std::string_view text) {
  if (text.empty()) throw validity_error("empty rational literal");
  try {
    return Rat(std::string(text));
  } catch (const std::exception&) {
    throw validity_error("bad rational literal: '" + std::string(text) + "'");
  }
}

// Emits "p" or "p/q"; inverse of rat_from_string.
inline std::string rat_to_string(const Rat& value) { return value.str(); }

inline double to_double(const Rat& value) { return value.convert_to<double>(); }

// r^k with the 0^0 = 1 convention used by the continuation formulas.
inline Rat rat_pow(const Rat& base, std::int64_t exponent) {
  if (exponent < 0) throw std::invalid_argument("rat_pow: negative exponent");
  Rat result = 1;
  Rat acc = base;
  std::uint64_t e = static_cast<std::uint64_t>(exponent);
  while (e != 0) {
    if (e & 1u) result *= acc;
    acc *= acc;
    e >>= 1u;
  }
  return result;
}

inline Rat rat_factorial(std::int64_t n) {
  if (n < 0) throw std::invalid_argument("rat_factorial: negative argument");
  BigInt f = 1;
  for (std::int64_t i = 2; i <= n; ++i) f *= i;
  return Rat(f);
}

}  // namespace continuum
