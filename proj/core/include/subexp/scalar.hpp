#pragma once

#include <boost/multiprecision/cpp_int.hpp>

namespace subexp {

/// Absolute tolerance for floating-point assertions and validators.
inline constexpr double abs_tol = 1e-12;

/// Arbitrary-precision rational scalar. Evaluation over this type is exact;
/// the exhaustive inequality sweeps run on it so that no check can fail from
/// rounding.
using Rational = boost::multiprecision::cpp_rational;

inline double to_double(double x) noexcept { return x; }
inline double to_double(const Rational& q) { return q.convert_to<double>(); }

template <class S>
inline constexpr bool is_exact_scalar = false;
template <>
inline constexpr bool is_exact_scalar<Rational> = true;

/// Slack used when comparing computed scalars: zero in exact mode.
template <class S>
inline S comparison_slack() {
  if constexpr (is_exact_scalar<S>) {
    return S(0);
  } else {
    return S(abs_tol);
  }
}

template <class S>
inline S scalar_abs(const S& x) {
  return x < S(0) ? S(-x) : x;
}

}  // namespace subexp
