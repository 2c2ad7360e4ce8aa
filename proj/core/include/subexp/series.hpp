#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "subexp/dp.hpp"
#include "subexp/table.hpp"
#include "subexp/test_functions.hpp"

namespace subexp::series {

enum class ScaleKind { geometric, power, constant };

/**
 * Sequence whose k-th factor is the base family with support scaled by a
 * closed-form coefficient a_k: geometric a_k = q^k, power a_k = k^p,
 * constant a_k = q. Indices are 1-based to match partial-sum notation.
 */
class SequenceGenerator {
 public:
  SequenceGenerator(AmbiguitySet base, ScaleKind kind, double param, std::size_t horizon);

  double scale_at(std::size_t k) const;
  AmbiguitySet factor(std::size_t k) const;
  std::size_t horizon() const noexcept { return horizon_; }
  const AmbiguitySet& base() const noexcept { return base_; }
  ScaleKind kind() const noexcept { return kind_; }
  double param() const noexcept { return param_; }

  /// Factors 1..n as a sequence.
  dp::IndependentSequence<double> prefix(std::size_t n) const;
  /// Factors m+1..n, the window behind a partial-sum difference S_n - S_m.
  dp::IndependentSequence<double> window(std::size_t m, std::size_t n) const;

 private:
  AmbiguitySet base_;
  ScaleKind kind_;
  double param_;
  std::size_t horizon_;
};

struct ThreeSeriesRow {
  std::int64_t n;
  double s1_term, s2_upper_term, s2_lower_term, s3_term;
  double s1, s2_upper, s2_lower, s3;  // partial sums through n
};

struct ThreeSeriesReport {
  double c = 0;
  std::vector<ThreeSeriesRow> rows;
  const ThreeSeriesRow& last() const { return rows.back(); }
  Table table() const;
};

/**
 * Term-by-term traces of the three convergence series at truncation level c:
 *   s1: capacities V(|X_n| > c),
 *   s2: upper means of the truncated variable and of its negation,
 *   s3: upper second moments of the truncated variable, centered at its
 *       upper mean.
 * All terms are per-factor quantities; no path enumeration is involved.
 */
ThreeSeriesReport three_series_report(const SequenceGenerator& gen, double c, std::size_t count);

struct CauchyRow {
  std::int64_t m, n;
  double eps;
  double upper, lower;  // capacity pair of {|S_n - S_m| >= eps}
};

struct CauchyReport {
  std::vector<CauchyRow> rows;
  Table table() const;
};

/**
 * Capacity pair of window-sum deviations {|S_n - S_m| >= eps} for the given
 * index pairs. Windows of single-law factors whose joint support outgrows the
 * state cap are evaluated by the exact product-measure split, so wide windows
 * are fine.
 */
CauchyReport cauchy_capacity_diagnostic(const SequenceGenerator& gen, double eps,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        std::size_t state_cap = dp::default_state_cap);

struct DistributionRow {
  std::string phi;
  std::int64_t n;
  double value;  // upper expectation of phi(S_n)
  double step;   // change from the previous checkpoint, 0 at the first
};

struct DistributionReport {
  std::vector<DistributionRow> rows;
  Table table() const;
};

/// Upper expectations of phi(S_n) along checkpoints, with successive
/// differences as a stabilization trace.
DistributionReport distribution_diagnostic(const SequenceGenerator& gen,
                                           const std::vector<TestFunction>& funcs,
                                           const std::vector<std::size_t>& checkpoints,
                                           std::size_t state_cap = dp::default_state_cap);

}  // namespace subexp::series
