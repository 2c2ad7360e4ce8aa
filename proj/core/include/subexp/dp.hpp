#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "subexp/ambiguity.hpp"

namespace subexp::dp {

/// Raised when an exact state lattice would exceed the configured cap.
/// Exceeding the cap is an error by design; results are never approximated.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_state_cap = 50'000'000;

/**
 * A finite sequence of factors, each an ambiguity set. Factor k+1 is treated
 * as independent of the first k factors in the sequential sense: the value of
 * a path functional is computed by the backward recursion in which the
 * adversary picks a law for each factor after seeing the realized history.
 */
template <class S>
class IndependentSequence {
 public:
  explicit IndependentSequence(std::vector<BasicAmbiguitySet<S>> factors)
      : factors_(std::move(factors)) {
    if (factors_.empty()) {
      throw std::invalid_argument("sequence: needs at least one factor");
    }
  }

  static IndependentSequence iid(const BasicAmbiguitySet<S>& a, std::size_t n) {
    if (n == 0) throw std::invalid_argument("sequence: needs at least one factor");
    return IndependentSequence(std::vector<BasicAmbiguitySet<S>>(n, a));
  }

  std::size_t size() const noexcept { return factors_.size(); }
  const BasicAmbiguitySet<S>& factor(std::size_t k) const { return factors_.at(k); }
  const std::vector<BasicAmbiguitySet<S>>& factors() const noexcept { return factors_; }

  /// Copy of factors [begin, end), 0-based half-open.
  IndependentSequence subsequence(std::size_t begin, std::size_t end) const {
    if (begin >= end || end > factors_.size()) {
      throw std::invalid_argument("sequence: invalid subsequence range");
    }
    return IndependentSequence(std::vector<BasicAmbiguitySet<S>>(
        factors_.begin() + static_cast<std::ptrdiff_t>(begin),
        factors_.begin() + static_cast<std::ptrdiff_t>(end)));
  }

 private:
  std::vector<BasicAmbiguitySet<S>> factors_;
};

enum class Kind {
  terminal_sum,        // payoff(S_n)
  terminal_normalized, // payoff(S_n / sqrt(n)); floating-point scalars only
  running_max,         // payoff(max_k (S_k - beta_k))
  running_max_abs,     // payoff(max_k (|S_k| - beta_k))
  full_path,           // payoff sees all increments; no state compression
};

template <class S>
struct PathFunctional {
  Kind kind = Kind::terminal_sum;
  std::vector<S> beta;  // running_max kinds only; empty means zero drift
  std::function<S(const S&)> payoff;
  std::function<S(std::span<const S>)> path_payoff;  // full_path only

  static PathFunctional terminal(std::function<S(const S&)> f) {
    return {Kind::terminal_sum, {}, std::move(f), nullptr};
  }
  static PathFunctional normalized_terminal(std::function<S(const S&)> f) {
    return {Kind::terminal_normalized, {}, std::move(f), nullptr};
  }
  static PathFunctional running_max(std::function<S(const S&)> f, std::vector<S> beta = {}) {
    return {Kind::running_max, std::move(beta), std::move(f), nullptr};
  }
  static PathFunctional running_max_abs(std::function<S(const S&)> f, std::vector<S> beta = {}) {
    return {Kind::running_max_abs, std::move(beta), std::move(f), nullptr};
  }
  static PathFunctional full_path(std::function<S(std::span<const S>)> f) {
    return {Kind::full_path, {}, nullptr, std::move(f)};
  }
};

/// Event on the compressed state of a path functional.
template <class S>
struct PathEvent {
  Kind kind = Kind::terminal_sum;  // terminal_sum or a running_max kind
  std::vector<S> beta;
  Rel rel = Rel::ge;
  S threshold{};
};

namespace detail {

template <class S>
void check_functional(const IndependentSequence<S>& seq, Kind kind, const std::vector<S>& beta) {
  const bool max_kind = kind == Kind::running_max || kind == Kind::running_max_abs;
  if (!max_kind && !beta.empty()) {
    throw std::invalid_argument("path functional: drift vector only applies to running-max kinds");
  }
  if (max_kind && !beta.empty() && beta.size() != seq.size()) {
    throw std::invalid_argument("path functional: drift vector has " + std::to_string(beta.size()) +
                                " entries for " + std::to_string(seq.size()) + " factors");
  }
}

template <class S>
S normalized_scale(std::size_t n) {
  if constexpr (is_exact_scalar<S>) {
    throw std::invalid_argument("terminal_normalized needs floating-point scalars");
  } else {
    return S(1) / std::sqrt(static_cast<S>(n));
  }
}

// Recipes define the compressed state, its transition, and the scalar feature
// the payoff sees. Transitions are monotone in the state, which keeps each
// per-point image of a sorted layer sorted and enables the dedup merge below.

template <class S>
struct SumRecipe {
  using State = S;
  State first(const S& x) const { return x; }
  State advance(const State& st, const S& x, std::size_t) const { return st + x; }
  const S& feature(const State& st) const { return st; }
  static const S& sum_of(const State& st) { return st; }
};

template <class S, bool Abs>
struct MaxRecipe {
  using State = std::pair<S, S>;  // (running sum, running max of drifted value)
  const std::vector<S>* beta;     // null or empty: zero drift

  S drifted(const S& s, std::size_t k) const {
    S v = Abs ? scalar_abs(s) : s;
    if (beta && !beta->empty()) v -= (*beta)[k];
    return v;
  }
  State first(const S& x) const { return {x, drifted(x, 0)}; }
  State advance(const State& st, const S& x, std::size_t k) const {
    S s = st.first + x;
    S v = drifted(s, k);
    if (st.second > v) v = st.second;
    return {std::move(s), std::move(v)};
  }
  const S& feature(const State& st) const { return st.second; }
  static const S& sum_of(const State& st) { return st.first; }
};

[[noreturn]] inline void throw_cap(std::size_t layer, std::size_t cap) {
  throw ResourceError("dp: state lattice at layer " + std::to_string(layer) +
                      " exceeds the cap of " + std::to_string(cap) + " states");
}

/**
 * Exact reachable state sets, layer by layer. layers[k] holds the states
 * after k+1 factors, sorted and deduplicated by exact comparison.
 */
template <class S, class Recipe>
std::vector<std::vector<typename Recipe::State>> build_lattice(
    const IndependentSequence<S>& seq, const Recipe& rec, std::size_t cap) {
  using State = typename Recipe::State;
  const std::size_t n = seq.size();
  std::vector<std::vector<State>> layers;
  layers.reserve(n);

  std::vector<State> cur;
  for (const S& x : seq.factor(0).support().points()) cur.push_back(rec.first(x));
  std::sort(cur.begin(), cur.end());
  cur.erase(std::unique(cur.begin(), cur.end()), cur.end());
  if (cur.size() > cap) throw_cap(1, cap);
  layers.push_back(std::move(cur));

  for (std::size_t k = 1; k < n; ++k) {
    const auto& pts = seq.factor(k).support().points();
    const auto& prev = layers[k - 1];
    const std::size_t m = pts.size();
    // k-way merge of the per-point images of prev; dedup on the fly so the
    // peak memory is the output layer, not the multiset of candidates
    std::vector<State> next;
    std::vector<std::size_t> pos(m, 0);
    std::vector<std::optional<State>> head(m);
    for (std::size_t j = 0; j < m; ++j) head[j] = rec.advance(prev[0], pts[j], k);
    while (true) {
      std::size_t best = m;
      for (std::size_t j = 0; j < m; ++j) {
        if (head[j] && (best == m || *head[j] < *head[best])) best = j;
      }
      if (best == m) break;
      State st = std::move(*head[best]);
      ++pos[best];
      if (pos[best] < prev.size()) {
        head[best] = rec.advance(prev[pos[best]], pts[best], k);
      } else {
        head[best].reset();
      }
      if (next.empty() || !(next.back() == st)) {
        if (next.size() >= cap) throw_cap(k + 1, cap);
        next.push_back(std::move(st));
      }
    }
    layers.push_back(std::move(next));
  }
  return layers;
}

template <class State>
std::size_t state_index(const std::vector<State>& layer, const State& st) {
  auto it = std::lower_bound(layer.begin(), layer.end(), st);
  if (it == layer.end() || !(*it == st)) {
    throw std::logic_error("dp: transition target missing from lattice");
  }
  return static_cast<std::size_t>(it - layer.begin());
}

/**
 * One backward sweep over a prebuilt lattice. Maximizing sweeps may record
 * the choosing law per state; ties resolve to the lowest law index.
 */
template <class S, class Recipe>
S backward_sweep(const IndependentSequence<S>& seq, const Recipe& rec,
                 const std::vector<std::vector<typename Recipe::State>>& layers,
                 const std::function<S(const S&)>& payoff, bool maximize,
                 std::vector<std::vector<std::uint32_t>>* policy) {
  const std::size_t n = seq.size();
  if (policy) policy->assign(n, {});

  std::vector<S> vals;
  vals.reserve(layers[n - 1].size());
  for (const auto& st : layers[n - 1]) vals.push_back(payoff(rec.feature(st)));

  for (std::size_t k = n; k-- > 1;) {
    const auto& prev = layers[k - 1];
    const auto& next = layers[k];
    const auto& fam = seq.factor(k);
    const auto& pts = fam.support().points();
    std::vector<S> out;
    out.reserve(prev.size());
    std::vector<std::uint32_t>* pol = nullptr;
    if (policy) {
      (*policy)[k].resize(prev.size());
      pol = &(*policy)[k];
    }
    std::vector<std::size_t> idx(pts.size());
    for (std::size_t i = 0; i < prev.size(); ++i) {
      for (std::size_t j = 0; j < pts.size(); ++j) {
        idx[j] = state_index(next, rec.advance(prev[i], pts[j], k));
      }
      std::optional<S> best;
      std::uint32_t arg = 0;
      for (std::uint32_t l = 0; l < fam.law_count(); ++l) {
        const auto& w = fam.law(l).weights();
        S acc(0);
        for (std::size_t j = 0; j < pts.size(); ++j) {
          if (!(w[j] == S(0))) acc += w[j] * vals[idx[j]];
        }
        if (!best || (maximize ? acc > *best : acc < *best)) {
          best = std::move(acc);
          arg = l;
        }
      }
      out.push_back(std::move(*best));
      if (pol) (*pol)[i] = arg;
    }
    vals = std::move(out);
  }

  const auto& fam = seq.factor(0);
  const auto& pts = fam.support().points();
  std::vector<std::size_t> idx(pts.size());
  for (std::size_t j = 0; j < pts.size(); ++j) {
    idx[j] = state_index(layers[0], rec.first(pts[j]));
  }
  std::optional<S> best;
  std::uint32_t arg = 0;
  for (std::uint32_t l = 0; l < fam.law_count(); ++l) {
    const auto& w = fam.law(l).weights();
    S acc(0);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (!(w[j] == S(0))) acc += w[j] * vals[idx[j]];
    }
    if (!best || (maximize ? acc > *best : acc < *best)) {
      best = std::move(acc);
      arg = l;
    }
  }
  if (policy) (*policy)[0] = {arg};
  return std::move(*best);
}

template <class S>
S full_path_value(const IndependentSequence<S>& seq,
                  const std::function<S(std::span<const S>)>& payoff, bool maximize,
                  std::size_t cap) {
  const std::size_t n = seq.size();
  std::size_t paths = 1;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t m = seq.factor(k).support().size();
    if (paths > cap / m) throw_cap(k + 1, cap);
    paths *= m;
  }
  std::vector<S> hist(n);
  const std::function<S(std::size_t)> rec = [&](std::size_t k) -> S {
    if (k == n) return payoff(std::span<const S>(hist));
    const auto& fam = seq.factor(k);
    const auto& pts = fam.support().points();
    std::vector<S> child(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      hist[k] = pts[j];
      child[j] = rec(k + 1);
    }
    std::optional<S> best;
    for (std::size_t l = 0; l < fam.law_count(); ++l) {
      const auto& w = fam.law(l).weights();
      S acc(0);
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!(w[j] == S(0))) acc += w[j] * child[j];
      }
      if (!best || (maximize ? acc > *best : acc < *best)) best = std::move(acc);
    }
    return std::move(*best);
  };
  return rec(0);
}

template <class S>
S engine_value(const IndependentSequence<S>& seq, const PathFunctional<S>& f, bool maximize,
               std::size_t cap, std::vector<std::vector<std::uint32_t>>* policy = nullptr) {
  check_functional(seq, f.kind, f.beta);
  switch (f.kind) {
    case Kind::terminal_sum: {
      SumRecipe<S> rec;
      auto layers = build_lattice(seq, rec, cap);
      return backward_sweep(seq, rec, layers, f.payoff, maximize, policy);
    }
    case Kind::terminal_normalized: {
      const S scl = normalized_scale<S>(seq.size());
      SumRecipe<S> rec;
      auto layers = build_lattice(seq, rec, cap);
      std::function<S(const S&)> scaled = [&f, scl](const S& s) { return f.payoff(s * scl); };
      return backward_sweep(seq, rec, layers, scaled, maximize, policy);
    }
    case Kind::running_max: {
      MaxRecipe<S, false> rec{&f.beta};
      auto layers = build_lattice(seq, rec, cap);
      return backward_sweep(seq, rec, layers, f.payoff, maximize, policy);
    }
    case Kind::running_max_abs: {
      MaxRecipe<S, true> rec{&f.beta};
      auto layers = build_lattice(seq, rec, cap);
      return backward_sweep(seq, rec, layers, f.payoff, maximize, policy);
    }
    case Kind::full_path: {
      if (policy) throw std::invalid_argument("dp: policies are not defined for full-path payoffs");
      if (!f.path_payoff) throw std::invalid_argument("dp: full_path functional lacks a payoff");
      return full_path_value(seq, f.path_payoff, maximize, cap);
    }
  }
  throw std::logic_error("dp: unknown functional kind");
}

}  // namespace detail

/// Upper nested expectation of a path functional.
template <class S>
S nested_expectation(const IndependentSequence<S>& seq, const PathFunctional<S>& f,
                     std::size_t state_cap = default_state_cap) {
  return detail::engine_value(seq, f, /*maximize=*/true, state_cap);
}

/// Lower nested expectation; conjugate to the upper one.
template <class S>
S nested_lower_expectation(const IndependentSequence<S>& seq, const PathFunctional<S>& f,
                           std::size_t state_cap = default_state_cap) {
  return detail::engine_value(seq, f, /*maximize=*/false, state_cap);
}

template <class S>
bool all_singleton(const IndependentSequence<S>& seq) {
  for (const auto& fam : seq.factors()) {
    if (fam.law_count() != 1) return false;
  }
  return true;
}

/**
 * Exact tail probability of the terminal sum of a single-law sequence,
 * evaluated by enumerating the two halves of the factor list and matching
 * sorted half-sums. Used where the full reachable lattice would exceed any
 * reasonable cap; for single-law factors the nested value equals the product
 * measure value, so this is an exact reformulation, not an approximation.
 *
 * Thresholds are resolved by comparing half-sums against x - a, which agrees
 * with comparing a + b against x exactly in rational mode and up to one
 * rounding of the threshold over doubles.
 */
template <class S>
S classical_terminal_event_probability(const IndependentSequence<S>& seq, Rel rel, const S& x,
                                       std::size_t half_cap = (std::size_t{1} << 22)) {
  if (!all_singleton(seq)) {
    throw std::invalid_argument("classical evaluation needs single-law factors");
  }
  const std::size_t n = seq.size();
  // count per-factor points carrying mass
  std::vector<std::vector<std::pair<S, S>>> atoms(n);  // (point, weight), zero weights dropped
  for (std::size_t k = 0; k < n; ++k) {
    const auto& fam = seq.factor(k);
    const auto& w = fam.law(0).weights();
    for (std::size_t j = 0; j < fam.support().size(); ++j) {
      if (!(w[j] == S(0))) atoms[k].push_back({fam.support()[j], w[j]});
    }
    if (atoms[k].empty()) throw std::logic_error("classical evaluation: weightless factor");
  }
  // split minimizing the larger half size
  double best_cost = std::numeric_limits<double>::infinity();
  std::size_t split = 1;
  {
    std::vector<double> logc(n + 1, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      logc[k + 1] = logc[k] + std::log2(static_cast<double>(atoms[k].size()));
    }
    for (std::size_t h = 1; h < n; ++h) {
      const double cost = std::max(logc[h], logc[n] - logc[h]);
      if (cost < best_cost) {
        best_cost = cost;
        split = h;
      }
    }
    if (n == 1) split = 1;
  }

  auto enumerate = [&](std::size_t lo, std::size_t hi) {
    std::vector<std::pair<S, S>> out{{S(0), S(1)}};
    for (std::size_t k = lo; k < hi; ++k) {
      if (out.size() > half_cap / atoms[k].size()) {
        throw ResourceError("dp: classical split half exceeds " + std::to_string(half_cap) +
                            " atoms");
      }
      std::vector<std::pair<S, S>> next;
      next.reserve(out.size() * atoms[k].size());
      for (const auto& [s, w] : out) {
        for (const auto& [p, pw] : atoms[k]) next.push_back({s + p, w * pw});
      }
      out = std::move(next);
    }
    return out;
  };

  auto left = enumerate(0, split);
  auto right = n == 1 ? std::vector<std::pair<S, S>>{{S(0), S(1)}} : enumerate(split, n);
  std::sort(right.begin(), right.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<S> rsum(right.size());
  std::vector<S> prefix(right.size() + 1, S(0));
  for (std::size_t i = 0; i < right.size(); ++i) {
    rsum[i] = right[i].first;
    prefix[i + 1] = prefix[i] + right[i].second;
  }
  const S total = prefix.back();

  auto mass_from = [&](const S& t, bool strict) {  // weight of {b >= t} or {b > t}
    auto it = strict ? std::upper_bound(rsum.begin(), rsum.end(), t)
                     : std::lower_bound(rsum.begin(), rsum.end(), t);
    return total - prefix[static_cast<std::size_t>(it - rsum.begin())];
  };
  auto mass_to = [&](const S& t, bool strict) {  // weight of {b <= t} or {b < t}
    auto it = strict ? std::lower_bound(rsum.begin(), rsum.end(), t)
                     : std::upper_bound(rsum.begin(), rsum.end(), t);
    return prefix[static_cast<std::size_t>(it - rsum.begin())];
  };

  S p(0);
  for (const auto& [a, wa] : left) {
    S mass(0);
    switch (rel) {
      case Rel::gt: mass = mass_from(x - a, true); break;
      case Rel::ge: mass = mass_from(x - a, false); break;
      case Rel::lt: mass = mass_to(x - a, true); break;
      case Rel::le: mass = mass_to(x - a, false); break;
      case Rel::abs_gt:
        mass = x < S(0) ? total : mass_from(x - a, true) + mass_to(S(0) - x - a, true);
        break;
      case Rel::abs_ge:
        mass = x <= S(0) ? total : mass_from(x - a, false) + mass_to(S(0) - x - a, false);
        break;
    }
    p += wa * mass;
  }
  return p;
}

namespace detail {

/// One-sided capacity of a path event: the chosen sweep over its indicator.
/// Terminal-sum events over single-law sequences whose lattice would blow the
/// cap are routed to the exact classical evaluation above (both sides agree
/// there, the measure being unique).
template <class S>
S path_event_value(const IndependentSequence<S>& seq, const PathEvent<S>& ev, bool maximize,
                   std::size_t state_cap) {
  if (ev.kind == Kind::terminal_normalized || ev.kind == Kind::full_path) {
    throw std::invalid_argument("path_capacity: event must be on the sum or a running max");
  }
  if (ev.kind == Kind::terminal_sum && all_singleton(seq)) {
    std::size_t product = 1;
    bool overflow = false;
    for (const auto& fam : seq.factors()) {
      if (product > state_cap / fam.support().size()) {
        overflow = true;
        break;
      }
      product *= fam.support().size();
    }
    if (overflow || product > state_cap) {
      return classical_terminal_event_probability(seq, ev.rel, ev.threshold);
    }
  }
  PathFunctional<S> f;
  f.kind = ev.kind;
  f.beta = ev.beta;
  const Rel rel = ev.rel;
  const S threshold = ev.threshold;
  f.payoff = [rel, threshold](const S& v) { return rel_holds(rel, v, threshold) ? S(1) : S(0); };
  return detail::engine_value(seq, f, maximize, state_cap);
}

}  // namespace detail

/// Upper capacity of a path event alone; half the work of path_capacity when
/// the lower side is not needed.
template <class S>
S upper_path_capacity(const IndependentSequence<S>& seq, const PathEvent<S>& ev,
                      std::size_t state_cap = default_state_cap) {
  return detail::path_event_value(seq, ev, /*maximize=*/true, state_cap);
}

/// Capacity pair of a path event: upper by the maximizing sweep over the
/// indicator, lower by the minimizing sweep, which coincides with
/// 1 - upper(complement).
template <class S>
BasicCapacityPair<S> path_capacity(const IndependentSequence<S>& seq, const PathEvent<S>& ev,
                                   std::size_t state_cap = default_state_cap) {
  S up = detail::path_event_value(seq, ev, true, state_cap);
  S lo = detail::path_event_value(seq, ev, false, state_cap);
  return BasicCapacityPair<S>(std::move(up), std::move(lo));
}

// ---------------------------------------------------------------------------
// reference oracle
// ---------------------------------------------------------------------------

/**
 * Literal evaluation of the nested recursion over full histories, with the
 * functional recomputed from raw increments. No shared state machinery with
 * the lattice engine, so agreement between the two is meaningful. Guarded to
 * small instances: n <= 6, supports <= 4 points, families <= 3 laws.
 */
template <class S>
S brute_force_expectation(const IndependentSequence<S>& seq, const PathFunctional<S>& f,
                          bool maximize = true) {
  const std::size_t n = seq.size();
  if (n > 6) throw std::invalid_argument("brute force: limited to 6 factors");
  for (const auto& fam : seq.factors()) {
    if (fam.support().size() > 4) throw std::invalid_argument("brute force: limited to 4-point supports");
    if (fam.law_count() > 3) throw std::invalid_argument("brute force: limited to 3-law families");
  }
  detail::check_functional(seq, f.kind, f.beta);

  auto evaluate = [&](std::span<const S> hist) -> S {
    switch (f.kind) {
      case Kind::full_path:
        return f.path_payoff(hist);
      case Kind::terminal_sum: {
        S s(0);
        for (const S& x : hist) s += x;
        return f.payoff(s);
      }
      case Kind::terminal_normalized: {
        S s(0);
        for (const S& x : hist) s += x;
        return f.payoff(s * detail::normalized_scale<S>(n));
      }
      case Kind::running_max:
      case Kind::running_max_abs: {
        S s(0);
        std::optional<S> m;
        for (std::size_t k = 0; k < hist.size(); ++k) {
          s += hist[k];
          S v = f.kind == Kind::running_max_abs ? scalar_abs(s) : s;
          if (!f.beta.empty()) v -= f.beta[k];
          if (!m || v > *m) m = std::move(v);
        }
        return f.payoff(*m);
      }
    }
    throw std::logic_error("brute force: unknown functional kind");
  };

  std::vector<S> hist(n);
  const std::function<S(std::size_t)> rec = [&](std::size_t k) -> S {
    if (k == n) return evaluate(std::span<const S>(hist));
    const auto& fam = seq.factor(k);
    const auto& pts = fam.support().points();
    std::vector<S> child(pts.size());
    for (std::size_t j = 0; j < pts.size(); ++j) {
      hist[k] = pts[j];
      child[j] = rec(k + 1);
    }
    std::optional<S> best;
    for (std::size_t l = 0; l < fam.law_count(); ++l) {
      S acc(0);
      const auto& w = fam.law(l).weights();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!(w[j] == S(0))) acc += w[j] * child[j];
      }
      if (!best || (maximize ? acc > *best : acc < *best)) best = std::move(acc);
    }
    return std::move(*best);
  };
  return rec(0);
}

// ---------------------------------------------------------------------------
// adversary policies
// ---------------------------------------------------------------------------

template <class S>
struct PolicyLayer {
  std::vector<S> sum;               // running sums of the layer's states
  std::vector<S> acc;               // running-max feature, empty for terminal kinds
  std::vector<std::uint32_t> law;   // chosen law of this layer's factor per state
};

/**
 * A maximizing adversary: for each factor, the law chosen at every reachable
 * state after the preceding factors. Layer 0 holds the single pre-play state.
 */
template <class S>
struct AdversaryPolicy {
  std::vector<PolicyLayer<S>> layers;
  S value{};
};

template <class S>
AdversaryPolicy<S> extract_policy(const IndependentSequence<S>& seq, const PathFunctional<S>& f,
                                  std::size_t state_cap = default_state_cap) {
  if (f.kind == Kind::full_path) {
    throw std::invalid_argument("dp: policies are not defined for full-path payoffs");
  }
  std::vector<std::vector<std::uint32_t>> choice;
  S value = detail::engine_value(seq, f, true, state_cap, &choice);

  AdversaryPolicy<S> pol;
  pol.value = std::move(value);
  pol.layers.resize(seq.size());
  pol.layers[0].sum = {S(0)};
  pol.layers[0].law = std::move(choice[0]);

  auto fill_max_layers = [&](auto rec) {
    auto layers = detail::build_lattice(seq, rec, state_cap);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      for (const auto& st : layers[k - 1]) {
        pol.layers[k].sum.push_back(st.first);
        pol.layers[k].acc.push_back(st.second);
      }
      pol.layers[k].law = std::move(choice[k]);
    }
  };
  if (f.kind == Kind::running_max_abs) {
    fill_max_layers(detail::MaxRecipe<S, true>{&f.beta});
  } else if (f.kind == Kind::running_max) {
    fill_max_layers(detail::MaxRecipe<S, false>{&f.beta});
  } else {
    detail::SumRecipe<S> rec;
    auto layers = detail::build_lattice(seq, rec, state_cap);
    for (std::size_t k = 1; k < seq.size(); ++k) {
      pol.layers[k].sum = layers[k - 1];
      pol.layers[k].law = std::move(choice[k]);
    }
  }
  return pol;
}

namespace detail {

template <class S, class Recipe>
S replay_with_recipe(const IndependentSequence<S>& seq, const Recipe& rec,
                     const AdversaryPolicy<S>& pol,
                     const std::function<S(const S&)>& payoff, std::size_t cap) {
  auto layers = build_lattice(seq, rec, cap);
  const std::size_t n = seq.size();
  if (pol.layers.size() != n) {
    throw std::invalid_argument("replay: policy has " + std::to_string(pol.layers.size()) +
                                " layers for " + std::to_string(n) + " factors");
  }
  for (std::size_t k = 1; k < n; ++k) {
    if (pol.layers[k].law.size() != layers[k - 1].size()) {
      throw std::invalid_argument("replay: policy layer " + std::to_string(k) +
                                  " does not match the reachable lattice");
    }
  }

  std::vector<S> prob;  // over layers[k]
  {
    const auto& fam = seq.factor(0);
    const auto& pts = fam.support().points();
    const auto& w = fam.law(pol.layers[0].law.at(0)).weights();
    prob.assign(layers[0].size(), S(0));
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (!(w[j] == S(0))) prob[state_index(layers[0], rec.first(pts[j]))] += w[j];
    }
  }
  for (std::size_t k = 1; k < n; ++k) {
    const auto& fam = seq.factor(k);
    const auto& pts = fam.support().points();
    std::vector<S> next(layers[k].size(), S(0));
    for (std::size_t i = 0; i < layers[k - 1].size(); ++i) {
      if (prob[i] == S(0)) continue;
      const auto& w = fam.law(pol.layers[k].law[i]).weights();
      for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!(w[j] == S(0))) {
          next[state_index(layers[k], rec.advance(layers[k - 1][i], pts[j], k))] += prob[i] * w[j];
        }
      }
    }
    prob = std::move(next);
  }
  S acc(0);
  for (std::size_t i = 0; i < layers[n - 1].size(); ++i) {
    if (!(prob[i] == S(0))) acc += prob[i] * payoff(rec.feature(layers[n - 1][i]));
  }
  return acc;
}

}  // namespace detail

/**
 * Classical expected payoff when the adversary plays a fixed policy. For the
 * policy extracted above this reproduces the nested upper expectation.
 */
template <class S>
S replay_policy(const IndependentSequence<S>& seq, const PathFunctional<S>& f,
                const AdversaryPolicy<S>& pol, std::size_t state_cap = default_state_cap) {
  detail::check_functional(seq, f.kind, f.beta);
  switch (f.kind) {
    case Kind::terminal_sum: {
      detail::SumRecipe<S> rec;
      return detail::replay_with_recipe(seq, rec, pol, f.payoff, state_cap);
    }
    case Kind::terminal_normalized: {
      const S scl = detail::normalized_scale<S>(seq.size());
      detail::SumRecipe<S> rec;
      std::function<S(const S&)> scaled = [&f, scl](const S& s) { return f.payoff(s * scl); };
      return detail::replay_with_recipe(seq, rec, pol, scaled, state_cap);
    }
    case Kind::running_max: {
      detail::MaxRecipe<S, false> rec{&f.beta};
      return detail::replay_with_recipe(seq, rec, pol, f.payoff, state_cap);
    }
    case Kind::running_max_abs: {
      detail::MaxRecipe<S, true> rec{&f.beta};
      return detail::replay_with_recipe(seq, rec, pol, f.payoff, state_cap);
    }
    case Kind::full_path:
      throw std::invalid_argument("dp: policies are not defined for full-path payoffs");
  }
  throw std::logic_error("dp: unknown functional kind");
}

}  // namespace subexp::dp
