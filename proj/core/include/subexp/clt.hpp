#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "subexp/ambiguity.hpp"
#include "subexp/dp.hpp"
#include "subexp/gpde.hpp"
#include "subexp/table.hpp"
#include "subexp/test_functions.hpp"

namespace subexp::clt {

/**
 * Moment descriptors of one increment law, as c- and x-indexed curves:
 *   second_capped(c) = E[min(X^2, c)]        (upper)
 *   mean_trunc(c)    = E[X truncated at c]   (upper)
 *   mean_trunc_neg(c)= E[-X truncated at c]  (upper)
 *   tail(x)          = V(|X| > x)
 * Exact profiles are derived from a family; analytic profiles can be supplied
 * directly for laws given in closed form.
 */
struct MomentProfile {
  std::function<double(double)> second_capped;
  std::function<double(double)> mean_trunc;
  std::function<double(double)> mean_trunc_neg;
  std::function<double(double)> tail;
  bool exact = false;
  double radius = 0.0;     // exact profiles: support radius
  double sigma_hi2 = 0.0;  // band of second moments where known
  double sigma_lo2 = 0.0;

  static MomentProfile from_family(const AmbiguitySet& fam);
};

enum class Verdict { holds, fails };

struct ConditionsReport {
  std::vector<double> c_schedule, x_schedule;
  std::vector<double> second_trace;     // second_capped along c_schedule
  std::vector<double> mean_trace;       // mean_trunc along c_schedule
  std::vector<double> mean_neg_trace;   // mean_trunc_neg along c_schedule
  std::vector<double> tail_trace;       // x^2 * tail(x) along x_schedule
  double sigma_hi2 = 0.0, sigma_lo2 = 0.0;
  Verdict moment_finite = Verdict::fails;
  Verdict tail_vanishes = Verdict::fails;
  Verdict mean_vanishes = Verdict::fails;
  /// True when the profile is exact and the schedules reach past the support
  /// radius, so the verdicts are conclusive rather than trends.
  bool definitive = false;
  bool all_hold() const {
    return moment_finite == Verdict::holds && tail_vanishes == Verdict::holds &&
           mean_vanishes == Verdict::holds;
  }
  Table table() const;
};

/**
 * Normalization preconditions, audited along geometric schedules:
 * (i) capped second moments stabilize, (ii) x^2-weighted tails vanish,
 * (iii) truncated means vanish from both sides. Trend rules: the last
 * increment of (i) must drop under a tenth of the first (or under 1e-9
 * outright), the last trace value of (ii) under a tenth of the trace maximum,
 * and of (iii) under a tenth of the first entry. Schedules must be strictly
 * increasing, positive, and at least three entries long.
 */
ConditionsReport clt_conditions(const MomentProfile& profile, std::vector<double> c_schedule,
                                std::vector<double> x_schedule);

/// E[phi(S_n / sqrt(n))] for n i.i.d. copies of the family, exact lattice DP.
double normalized_sum_expectation(const AmbiguitySet& fam, const std::function<double(double)>& phi,
                                  std::size_t n, std::size_t state_cap = dp::default_state_cap);

struct ConvergenceRow {
  std::string phi;
  std::int64_t n;
  double dp_value;   // E[phi(S_n / sqrt(n))]
  double pde_value;  // E[phi(xi)] for the matching volatility band
  double gap;        // |dp_value - pde_value|
};

struct ConvergenceReport {
  double sigma_hi2 = 0.0, sigma_lo2 = 0.0;
  std::vector<ConvergenceRow> rows;
  double max_gap(std::size_t n) const;
  Table table() const;
};

/**
 * Normalized sums against the volatility-band limit law: the band is read off
 * the family's second moments, the limit side is solved on the given grid,
 * and each row pairs one test function with one n from the schedule.
 */
ConvergenceReport clt_convergence_report(const AmbiguitySet& fam,
                                         const std::vector<TestFunction>& funcs,
                                         const std::vector<std::size_t>& n_schedule,
                                         const gpde::Grid& grid,
                                         std::size_t state_cap = dp::default_state_cap);

struct LindebergRow {
  std::int64_t n;
  double mean_sum;    // n^{-1/2} sum_k (|E[X_nk]| + |E[-X_nk]|)
  double align_sum;   // n^{-1} sum_k (|E[X^2] - sigma_hi2| + |conj E[X^2] - sigma_lo2|)
  double third_sum;   // n^{-3/2} sum_k E[|X|^3]
};

struct LindebergReport {
  std::vector<LindebergRow> rows;
  Verdict means_vanish = Verdict::fails;
  Verdict variances_align = Verdict::fails;
  Verdict third_vanishes = Verdict::fails;
  bool all_hold() const {
    return means_vanish == Verdict::holds && variances_align == Verdict::holds &&
           third_vanishes == Verdict::holds;
  }
  Table table() const;
};

/**
 * Triangular-array normalization audit. entry(n, k) is the family of the k-th
 * increment in row n, k = 1..n. A trace passes when its last value is under
 * 1e-9, or it is non-increasing and its last value is at most half its first;
 * the schedule should span at least a factor of four for the halving rule to
 * have room. At least two strictly increasing row sizes are required.
 */
LindebergReport lindeberg_array_check(
    const std::function<AmbiguitySet(std::size_t, std::size_t)>& entry,
    const std::vector<std::size_t>& n_schedule, double sigma_hi2, double sigma_lo2);

}  // namespace subexp::clt
