#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subexp/dp.hpp"
#include "subexp/table.hpp"

namespace subexp::ineq {

/**
 * Maximal-inequality audit for sums under adversarial law choice.
 *
 * Each check evaluates both sides of one inequality with the nested engine
 * and reports whether it holds; in rational mode the comparison is exact.
 * The *_suite functions sweep a fixed grid of small families in rational
 * arithmetic so a reported violation can only mean a genuine counterexample.
 */

template <class S>
struct LevyResult {
  S alpha;          // max over k of the premise capacities; feasible level
  S max_capacity;   // V(max_k (S_k - beta_k) > x + eps), abs form with |S_k|
  S lhs;            // (1 - alpha) * max_capacity
  S rhs;            // V(S_n > x), abs form V(|S_n| > x)
  bool holds;
};

/**
 * Reflection-style bound: with alpha = max_k V(S_k - S_n > beta_k)
 * (k = n contributes the indicator of 0 > beta_n),
 *
 *     (1 - alpha) V(max_k (S_k - beta_k) > x + eps)  <=  V(S_n > x).
 *
 * The absolute form takes |S_k - S_n| in the premise, |S_k| - beta_k in the
 * running max and |S_n| on the right. beta must have one entry per factor.
 */
template <class S>
LevyResult<S> levy_check(const dp::IndependentSequence<S>& seq, const std::vector<S>& beta,
                         const S& x, const S& eps, bool absolute,
                         std::size_t state_cap = dp::default_state_cap) {
  const std::size_t n = seq.size();
  if (beta.size() != n)
    throw std::invalid_argument("levy_check: drift vector has " + std::to_string(beta.size()) +
                                " entries for " + std::to_string(n) + " factors");
  if (!(eps > S(0))) throw std::invalid_argument("levy_check: eps must be positive");

  LevyResult<S> r{};
  // Premise: for k < n the difference S_k - S_n is minus the window sum over
  // factors k+1..n, so the event rewrites as a terminal event on that window.
  r.alpha = beta[n - 1] < S(0) ? S(1) : S(0);
  for (std::size_t k = 1; k < n; ++k) {
    auto window = seq.subsequence(k, n);
    dp::PathEvent<S> ev;
    ev.kind = dp::Kind::terminal_sum;
    if (absolute) {
      ev.rel = Rel::abs_gt;
      ev.threshold = beta[k - 1];
    } else {
      ev.rel = Rel::lt;
      ev.threshold = S(-beta[k - 1]);
    }
    S cap = dp::upper_path_capacity(window, ev, state_cap);
    if (cap > r.alpha) r.alpha = std::move(cap);
  }

  dp::PathEvent<S> max_ev;
  max_ev.kind = absolute ? dp::Kind::running_max_abs : dp::Kind::running_max;
  max_ev.beta = beta;
  max_ev.rel = Rel::gt;
  max_ev.threshold = S(x + eps);
  r.max_capacity = dp::upper_path_capacity(seq, max_ev, state_cap);
  r.lhs = S((S(1) - r.alpha) * r.max_capacity);

  dp::PathEvent<S> tail;
  tail.kind = dp::Kind::terminal_sum;
  tail.rel = absolute ? Rel::abs_gt : Rel::gt;
  tail.threshold = x;
  r.rhs = dp::upper_path_capacity(seq, tail, state_cap);

  r.holds = r.lhs <= S(r.rhs + comparison_slack<S>());
  return r;
}

template <class S>
struct KolmogorovResult {
  S lhs, rhs;
  bool holds;
};

/**
 * Lower bound on the capacity of a large running maximum of |S_k|:
 *
 *   V(max_k |S_k| > x) >= 1 - ((x+c)^2 + 2x sum_k((E[X_k])^+ + (E[-X_k])^+))
 *                              / sum_k E[X_k^2]
 *
 * Requires |X_k| <= c for every factor and a positive quadratic sum.
 */
template <class S>
KolmogorovResult<S> kolmogorov_check_i(const dp::IndependentSequence<S>& seq, const S& x,
                                       const S& c, std::size_t state_cap = dp::default_state_cap) {
  if (!(x > S(0))) throw std::invalid_argument("kolmogorov_check_i: x must be positive");
  if (!(c > S(0))) throw std::invalid_argument("kolmogorov_check_i: c must be positive");
  S quad(0), drift(0);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& fam = seq.factor(k);
    if (fam.support().radius() > c)
      throw std::invalid_argument("kolmogorov_check_i: factor " + std::to_string(k) +
                                  " exceeds the bound c");
    quad += upper_expectation(fam, [](const S& v) { return S(v * v); });
    const S up = upper_expectation(fam, [](const S& v) { return v; });
    const S up_neg = upper_expectation(fam, [](const S& v) { return S(-v); });
    if (up > S(0)) drift += up;
    if (up_neg > S(0)) drift += up_neg;
  }
  if (!(quad > S(0)))
    throw std::invalid_argument("kolmogorov_check_i: degenerate sequence, zero quadratic sum");

  KolmogorovResult<S> r{};
  r.rhs = S(S(1) - (S((x + c) * (x + c)) + S(S(2) * x * drift)) / quad);
  dp::PathEvent<S> ev;
  ev.kind = dp::Kind::running_max_abs;
  ev.rel = Rel::gt;
  ev.threshold = x;
  r.lhs = dp::upper_path_capacity(seq, ev, state_cap);
  r.holds = S(r.lhs + comparison_slack<S>()) >= r.rhs;
  return r;
}

/**
 * One-sided variant for nonnegative-mean factors bounded above:
 *
 *   V(max_k S_k > x) >= 1 - (x + c) / sum_k E[X_k]
 *
 * Requires X_k <= c and E[X_k] >= 0 for every factor, with a positive mean
 * sum.
 */
template <class S>
KolmogorovResult<S> kolmogorov_check_ii(const dp::IndependentSequence<S>& seq, const S& x,
                                        const S& c, std::size_t state_cap = dp::default_state_cap) {
  if (!(x > S(0))) throw std::invalid_argument("kolmogorov_check_ii: x must be positive");
  S mean_sum(0);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& fam = seq.factor(k);
    if (fam.support().points().back() > c)
      throw std::invalid_argument("kolmogorov_check_ii: factor " + std::to_string(k) +
                                  " exceeds the upper bound c");
    const S up = upper_expectation(fam, [](const S& v) { return v; });
    if (up < S(0))
      throw std::invalid_argument("kolmogorov_check_ii: factor " + std::to_string(k) +
                                  " has negative upper mean");
    mean_sum += up;
  }
  if (!(mean_sum > S(0)))
    throw std::invalid_argument("kolmogorov_check_ii: degenerate sequence, zero mean sum");

  KolmogorovResult<S> r{};
  r.rhs = S(S(1) - S(x + c) / mean_sum);
  dp::PathEvent<S> ev;
  ev.kind = dp::Kind::running_max;
  ev.rel = Rel::gt;
  ev.threshold = x;
  r.lhs = dp::upper_path_capacity(seq, ev, state_cap);
  r.holds = S(r.lhs + comparison_slack<S>()) >= r.rhs;
  return r;
}

template <class S>
struct RosenthalResult {
  S tail_capacity;  // V(S_n >= x)
  S bound;          // sum_k E[X_k^2] / x^2
  double ratio;     // tail_capacity / bound; diagnostic only, never asserted
};

/**
 * Second-moment tail diagnostic for nonpositive-mean factors. The ratio
 * measures how much of the quadratic bound the adversary can realize; it is
 * reported, not asserted against a constant.
 */
template <class S>
RosenthalResult<S> rosenthal_ratio(const dp::IndependentSequence<S>& seq, const S& x,
                                   std::size_t state_cap = dp::default_state_cap) {
  if (!(x > S(0))) throw std::invalid_argument("rosenthal_ratio: x must be positive");
  S quad(0);
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto& fam = seq.factor(k);
    const S up = upper_expectation(fam, [](const S& v) { return v; });
    if (up > S(0))
      throw std::invalid_argument("rosenthal_ratio: factor " + std::to_string(k) +
                                  " has positive upper mean");
    quad += upper_expectation(fam, [](const S& v) { return S(v * v); });
  }
  RosenthalResult<S> r{};
  dp::PathEvent<S> ev;
  ev.kind = dp::Kind::terminal_sum;
  ev.rel = Rel::ge;
  ev.threshold = x;
  r.tail_capacity = dp::upper_path_capacity(seq, ev, state_cap);
  r.bound = S(quad / S(x * x));
  r.ratio = r.bound == S(0) ? 0.0 : to_double(r.tail_capacity) / to_double(r.bound);
  return r;
}

// ---------------------------------------------------------------------------
// exhaustive grid suites (exact arithmetic)
// ---------------------------------------------------------------------------

struct LevySuiteRow {
  std::string support, family, beta;
  std::int64_t n;
  std::string form;  // "gt" or "abs"
  double x, eps;
  double alpha, max_capacity, lhs, rhs;
  bool holds;
};

struct LevySuiteReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::vector<LevySuiteRow> rows;
  Table table() const;
};

/// Every i.i.d. family from the half-integer pool, n = 1..4, drift entries in
/// {0, +-1/2}, x in {1/2, 1, 3/2}, eps in {1/4, 1/2}, both forms. Exact.
LevySuiteReport levy_exhaustive_suite();

struct KolmogorovSuiteRow {
  std::string support, family;
  std::int64_t n;
  std::string form;  // "max_abs" or "max"
  double x, c;
  double lhs, rhs;
  bool holds;
};

struct KolmogorovSuiteReport {
  std::size_t instances = 0;
  std::size_t violations = 0;
  std::size_t skipped = 0;  // grid points whose preconditions fail
  std::vector<KolmogorovSuiteRow> rows;
  Table table() const;
};

KolmogorovSuiteReport kolmogorov_exhaustive_suite();

struct RosenthalSuiteRow {
  std::string support, family;
  std::int64_t n;
  double x;
  double tail_capacity, bound, ratio;
};

struct RosenthalSuiteReport {
  std::size_t instances = 0;
  double max_ratio = 0.0;
  std::string argmax;  // "support family n x" of the largest ratio
  std::vector<RosenthalSuiteRow> rows;
  Table table() const;
};

/// Full grid over the nonpositive-mean families, n = 1..6, x in
/// {1/2, 1, 2, 3}. Exact; max_ratio is the observed envelope.
RosenthalSuiteReport rosenthal_grid_suite();

/// Random draws from the same axes as the grid, so every sampled instance is
/// a grid instance and its ratio is bounded by the grid's max_ratio.
RosenthalSuiteReport rosenthal_random_suite(std::uint64_t seed, std::size_t cases);

}  // namespace subexp::ineq
