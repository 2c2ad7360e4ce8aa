#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subexp/scalar.hpp"

namespace subexp {

namespace detail {

template <class S>
std::string num_str(const S& x) {
  return std::to_string(to_double(x));
}

}  // namespace detail

/**
 * Finite support: a strictly increasing list of point values.
 *
 * All random variables in this library are functions on such a support, and
 * all laws are weight vectors over it. Construction validates eagerly.
 */
template <class S>
class BasicSupport {
 public:
  explicit BasicSupport(std::vector<S> points) : pts_(std::move(points)) {
    if (pts_.empty()) {
      throw std::invalid_argument("support: point set is empty");
    }
    for (std::size_t i = 1; i < pts_.size(); ++i) {
      if (!(pts_[i - 1] < pts_[i])) {
        throw std::invalid_argument("support: point " + std::to_string(i) +
                                    " (" + detail::num_str(pts_[i]) +
                                    ") must exceed point " + std::to_string(i - 1) +
                                    " (" + detail::num_str(pts_[i - 1]) + ")");
      }
    }
  }

  const std::vector<S>& points() const noexcept { return pts_; }
  std::size_t size() const noexcept { return pts_.size(); }
  const S& operator[](std::size_t i) const { return pts_[i]; }

  /// Largest magnitude over the support.
  S radius() const {
    return std::max(scalar_abs(pts_.front()), scalar_abs(pts_.back()));
  }

  bool contains(const S& x) const {
    return std::binary_search(pts_.begin(), pts_.end(), x);
  }

 private:
  std::vector<S> pts_;
};

/**
 * One probability law over a support: nonnegative weights summing to one
 * (exactly in rational mode, within abs_tol over doubles).
 */
template <class S>
class BasicDiscreteLaw {
 public:
  explicit BasicDiscreteLaw(std::vector<S> weights) : w_(std::move(weights)) {
    if (w_.empty()) {
      throw std::invalid_argument("law: weight vector is empty");
    }
    S sum(0);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (w_[i] < S(0)) {
        throw std::invalid_argument("law: weight " + std::to_string(i) + " (" +
                                    detail::num_str(w_[i]) + ") is negative");
      }
      sum += w_[i];
    }
    if (scalar_abs(sum - S(1)) > comparison_slack<S>()) {
      throw std::invalid_argument("law: weights sum to " + detail::num_str(sum) +
                                  ", expected 1");
    }
  }

  const std::vector<S>& weights() const noexcept { return w_; }
  std::size_t size() const noexcept { return w_.size(); }
  const S& operator[](std::size_t i) const { return w_[i]; }

  /// Expectation of the variable taking values[i] at support point i.
  S mean(std::span<const S> values) const {
    S acc(0);
    for (std::size_t i = 0; i < w_.size(); ++i) {
      if (!(w_[i] == S(0))) acc += w_[i] * values[i];
    }
    return acc;
  }

 private:
  std::vector<S> w_;
};

/**
 * A finite family of laws over a shared support.
 *
 * The upper expectation of a variable is the maximum of its classical
 * expectations across the family; the lower expectation is the minimum.
 * This pair realizes a sublinear expectation and its conjugate.
 */
template <class S>
class BasicAmbiguitySet {
 public:
  BasicAmbiguitySet(BasicSupport<S> support, std::vector<BasicDiscreteLaw<S>> laws)
      : support_(std::move(support)), laws_(std::move(laws)) {
    if (laws_.empty()) {
      throw std::invalid_argument("ambiguity set: law family is empty");
    }
    for (std::size_t i = 0; i < laws_.size(); ++i) {
      if (laws_[i].size() != support_.size()) {
        throw std::invalid_argument(
            "ambiguity set: law " + std::to_string(i) + " has " +
            std::to_string(laws_[i].size()) + " weights for " +
            std::to_string(support_.size()) + " support points");
      }
    }
  }

  const BasicSupport<S>& support() const noexcept { return support_; }
  const std::vector<BasicDiscreteLaw<S>>& laws() const noexcept { return laws_; }
  const BasicDiscreteLaw<S>& law(std::size_t i) const { return laws_[i]; }
  std::size_t law_count() const noexcept { return laws_.size(); }

 private:
  BasicSupport<S> support_;
  std::vector<BasicDiscreteLaw<S>> laws_;
};

/// Capacity evaluated from both sides: V(A) above, v(A) = 1 - V(comp A) below.
template <class S>
struct BasicCapacityPair {
  S upper;
  S lower;

  BasicCapacityPair(S up, S lo) : upper(std::move(up)), lower(std::move(lo)) {
    const S slack = comparison_slack<S>();
    if (lower < S(0) - slack || upper > S(1) + slack || upper < lower - slack) {
      throw std::invalid_argument("capacity pair: needs 0 <= lower <= upper <= 1, got [" +
                                  detail::num_str(lower) + ", " + detail::num_str(upper) + "]");
    }
  }
};

using Support = BasicSupport<double>;
using DiscreteLaw = BasicDiscreteLaw<double>;
using AmbiguitySet = BasicAmbiguitySet<double>;
using CapacityPair = BasicCapacityPair<double>;
using RationalSupport = BasicSupport<Rational>;
using RationalLaw = BasicDiscreteLaw<Rational>;
using RationalAmbiguitySet = BasicAmbiguitySet<Rational>;

// ---------------------------------------------------------------------------
// expectation operators
// ---------------------------------------------------------------------------

template <class S, class F>
  requires std::invocable<F, const S&>
std::vector<S> evaluate_on_support(const BasicAmbiguitySet<S>& a, F&& f) {
  std::vector<S> values;
  values.reserve(a.support().size());
  for (const S& x : a.support().points()) values.push_back(f(x));
  return values;
}

/// Max over the family, together with the lowest law index attaining it.
template <class S>
std::pair<S, std::size_t> upper_expectation_argmax(const BasicAmbiguitySet<S>& a,
                                                   std::span<const S> values) {
  if (values.size() != a.support().size()) {
    throw std::invalid_argument("upper_expectation: got " + std::to_string(values.size()) +
                                " values for " + std::to_string(a.support().size()) +
                                " support points");
  }
  S best = a.law(0).mean(values);
  std::size_t arg = 0;
  for (std::size_t i = 1; i < a.law_count(); ++i) {
    S m = a.law(i).mean(values);
    if (m > best) {
      best = std::move(m);
      arg = i;
    }
  }
  return {std::move(best), arg};
}

template <class S>
S upper_expectation(const BasicAmbiguitySet<S>& a, const std::vector<S>& values) {
  return upper_expectation_argmax<S>(a, std::span<const S>(values)).first;
}

template <class S, class F>
  requires std::invocable<F, const S&>
S upper_expectation(const BasicAmbiguitySet<S>& a, F&& f) {
  return upper_expectation(a, evaluate_on_support(a, std::forward<F>(f)));
}

template <class S>
S lower_expectation(const BasicAmbiguitySet<S>& a, const std::vector<S>& values) {
  if (values.size() != a.support().size()) {
    throw std::invalid_argument("lower_expectation: got " + std::to_string(values.size()) +
                                " values for " + std::to_string(a.support().size()) +
                                " support points");
  }
  S worst = a.law(0).mean(values);
  for (std::size_t i = 1; i < a.law_count(); ++i) {
    S m = a.law(i).mean(values);
    if (m < worst) worst = std::move(m);
  }
  return worst;
}

template <class S, class F>
  requires std::invocable<F, const S&>
S lower_expectation(const BasicAmbiguitySet<S>& a, F&& f) {
  return lower_expectation(a, evaluate_on_support(a, std::forward<F>(f)));
}

// ---------------------------------------------------------------------------
// events and capacities
// ---------------------------------------------------------------------------

/// Threshold relations. Strict and non-strict variants are distinct members
/// on purpose: membership is resolved exactly, never by nudging thresholds.
enum class Rel { gt, ge, lt, le, abs_gt, abs_ge };

template <class S>
bool rel_holds(Rel rel, const S& value, const S& threshold) {
  switch (rel) {
    case Rel::gt: return value > threshold;
    case Rel::ge: return value >= threshold;
    case Rel::lt: return value < threshold;
    case Rel::le: return value <= threshold;
    case Rel::abs_gt: return scalar_abs(value) > threshold;
    case Rel::abs_ge: return scalar_abs(value) >= threshold;
  }
  throw std::logic_error("rel_holds: unknown relation");
}

/// Subset of the support selected by a threshold relation.
template <class S>
std::vector<S> threshold_event(const BasicSupport<S>& support, Rel rel, const S& x) {
  std::vector<S> pts;
  for (const S& p : support.points()) {
    if (rel_holds(rel, p, x)) pts.push_back(p);
  }
  return pts;
}

template <class S>
std::vector<S> complement_event(const BasicSupport<S>& support, const std::vector<S>& event) {
  std::vector<S> pts;
  for (const S& p : support.points()) {
    if (!std::binary_search(event.begin(), event.end(), p)) pts.push_back(p);
  }
  return pts;
}

/**
 * Capacity of an event given as a subset of support points.
 *
 * upper = max over laws of the event mass, lower = min. The subset must be
 * sorted; a point outside the support is an error, not an empty
 * contribution.
 */
template <class S>
BasicCapacityPair<S> capacity(const BasicAmbiguitySet<S>& a, const std::vector<S>& event) {
  std::vector<S> indicator(a.support().size(), S(0));
  for (std::size_t i = 0; i < event.size(); ++i) {
    const auto& pts = a.support().points();
    auto it = std::lower_bound(pts.begin(), pts.end(), event[i]);
    if (it == pts.end() || !(*it == event[i])) {
      throw std::invalid_argument("capacity: event point " + std::to_string(i) + " (" +
                                  detail::num_str(event[i]) + ") is not in the support");
    }
    indicator[static_cast<std::size_t>(it - pts.begin())] = S(1);
  }
  S up = upper_expectation(a, indicator);
  S lo = lower_expectation(a, indicator);
  return BasicCapacityPair<S>(std::move(up), std::move(lo));
}

// ---------------------------------------------------------------------------
// truncation
// ---------------------------------------------------------------------------

/**
 * Law of (-c) v (X ^ c): support points are clipped to [-c, c] and weights of
 * coinciding clipped points merge exactly.
 */
template <class S>
BasicAmbiguitySet<S> truncate(const BasicAmbiguitySet<S>& a, const S& c) {
  if (!(c > S(0))) {
    throw std::invalid_argument("truncate: level must be positive, got " + detail::num_str(c));
  }
  const auto& pts = a.support().points();
  std::vector<S> clipped;
  clipped.reserve(pts.size());
  for (const S& p : pts) {
    clipped.push_back(std::min(std::max(p, S(-c)), c));
  }
  // clipped is non-decreasing; map each original index to its merged slot
  std::vector<S> merged;
  std::vector<std::size_t> slot(pts.size());
  for (std::size_t i = 0; i < clipped.size(); ++i) {
    if (merged.empty() || !(merged.back() == clipped[i])) merged.push_back(clipped[i]);
    slot[i] = merged.size() - 1;
  }
  std::vector<BasicDiscreteLaw<S>> laws;
  laws.reserve(a.law_count());
  for (const auto& law : a.laws()) {
    std::vector<S> w(merged.size(), S(0));
    for (std::size_t i = 0; i < pts.size(); ++i) w[slot[i]] += law[i];
    laws.emplace_back(std::move(w));
  }
  return BasicAmbiguitySet<S>(BasicSupport<S>(std::move(merged)), std::move(laws));
}

/// Rescale a family: support points multiplied by a > 0, weights unchanged.
template <class S>
BasicAmbiguitySet<S> scale(const BasicAmbiguitySet<S>& a, const S& factor) {
  if (!(factor > S(0))) {
    throw std::invalid_argument("scale: factor must be positive, got " + detail::num_str(factor));
  }
  std::vector<S> pts;
  pts.reserve(a.support().size());
  for (const S& p : a.support().points()) pts.push_back(p * factor);
  return BasicAmbiguitySet<S>(BasicSupport<S>(std::move(pts)), a.laws());
}

}  // namespace subexp
