#include "subexp/clt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace subexp::clt {

namespace {

void check_schedule(const std::vector<double>& s, const char* what, std::size_t min_len) {
  if (s.size() < min_len)
    throw std::invalid_argument(std::string(what) + ": needs at least " +
                                std::to_string(min_len) + " entries");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] > 0) || !std::isfinite(s[i]))
      throw std::invalid_argument(std::string(what) + ": entries must be positive and finite");
    if (i && !(s[i] > s[i - 1]))
      throw std::invalid_argument(std::string(what) + ": entries must be strictly increasing");
  }
}

bool vanishes_outright(double last) { return std::abs(last) <= 1e-9; }

}  // namespace

MomentProfile MomentProfile::from_family(const AmbiguitySet& fam) {
  MomentProfile p;
  p.exact = true;
  p.radius = fam.support().radius();
  auto square = [](const double& v) { return v * v; };
  p.sigma_hi2 = upper_expectation(fam, square);
  p.sigma_lo2 = lower_expectation(fam, square);
  p.second_capped = [fam](double c) {
    return upper_expectation(fam, [c](const double& v) { return std::min(v * v, c); });
  };
  p.mean_trunc = [fam](double c) {
    return upper_expectation(truncate(fam, c), [](const double& v) { return v; });
  };
  p.mean_trunc_neg = [fam](double c) {
    return upper_expectation(truncate(fam, c), [](const double& v) { return -v; });
  };
  p.tail = [fam](double x) {
    return capacity(fam, threshold_event(fam.support(), Rel::abs_gt, x)).upper;
  };
  return p;
}

ConditionsReport clt_conditions(const MomentProfile& profile, std::vector<double> c_schedule,
                                std::vector<double> x_schedule) {
  if (!profile.second_capped || !profile.mean_trunc || !profile.mean_trunc_neg || !profile.tail)
    throw std::invalid_argument("conditions check: profile has empty descriptors");
  check_schedule(c_schedule, "c schedule", 3);
  check_schedule(x_schedule, "x schedule", 3);

  ConditionsReport rep;
  rep.c_schedule = std::move(c_schedule);
  rep.x_schedule = std::move(x_schedule);
  rep.sigma_hi2 = profile.sigma_hi2;
  rep.sigma_lo2 = profile.sigma_lo2;

  for (double c : rep.c_schedule) {
    rep.second_trace.push_back(profile.second_capped(c));
    rep.mean_trace.push_back(profile.mean_trunc(c));
    rep.mean_neg_trace.push_back(profile.mean_trunc_neg(c));
  }
  for (double x : rep.x_schedule) rep.tail_trace.push_back(x * x * profile.tail(x));

  // (i) increments of the capped second moment die off
  {
    const std::size_t last = rep.second_trace.size() - 1;
    const double inc_first = rep.second_trace[1] - rep.second_trace[0];
    const double inc_last = rep.second_trace[last] - rep.second_trace[last - 1];
    rep.moment_finite = (vanishes_outright(inc_last) || inc_last <= 0.1 * inc_first)
                            ? Verdict::holds
                            : Verdict::fails;
  }
  // (ii) x^2-weighted tail drops to a fraction of its peak
  {
    const double peak = *std::max_element(rep.tail_trace.begin(), rep.tail_trace.end());
    const double last = rep.tail_trace.back();
    rep.tail_vanishes =
        (vanishes_outright(last) || last <= 0.1 * peak) ? Verdict::holds : Verdict::fails;
  }
  // (iii) truncated means vanish from both sides
  {
    const double first = std::max(std::abs(rep.mean_trace.front()), std::abs(rep.mean_neg_trace.front()));
    const double last = std::max(std::abs(rep.mean_trace.back()), std::abs(rep.mean_neg_trace.back()));
    rep.mean_vanishes =
        (vanishes_outright(last) || last <= 0.1 * first) ? Verdict::holds : Verdict::fails;
  }

  rep.definitive = profile.exact && rep.c_schedule.back() >= profile.radius * profile.radius &&
                   rep.x_schedule.back() > profile.radius;
  return rep;
}

Table ConditionsReport::table() const {
  Table t({"trace", "i", "arg", "value"});
  auto emit = [&](const char* name, const std::vector<double>& args,
                  const std::vector<double>& vals) {
    for (std::size_t i = 0; i < vals.size(); ++i)
      t.add_row({std::string(name), static_cast<std::int64_t>(i), args[i], vals[i]});
  };
  emit("second_capped", c_schedule, second_trace);
  emit("mean_trunc", c_schedule, mean_trace);
  emit("mean_trunc_neg", c_schedule, mean_neg_trace);
  emit("tail_x2", x_schedule, tail_trace);
  return t;
}

double normalized_sum_expectation(const AmbiguitySet& fam, const std::function<double(double)>& phi,
                                  std::size_t n, std::size_t state_cap) {
  const auto seq = dp::IndependentSequence<double>::iid(fam, n);
  const auto f = dp::PathFunctional<double>::normalized_terminal(phi);
  return dp::nested_expectation(seq, f, state_cap);
}

ConvergenceReport clt_convergence_report(const AmbiguitySet& fam,
                                         const std::vector<TestFunction>& funcs,
                                         const std::vector<std::size_t>& n_schedule,
                                         const gpde::Grid& grid, std::size_t state_cap) {
  if (funcs.empty()) throw std::invalid_argument("convergence report: no test functions");
  if (n_schedule.empty()) throw std::invalid_argument("convergence report: empty n schedule");
  ConvergenceReport rep;
  auto square = [](const double& v) { return v * v; };
  rep.sigma_hi2 = upper_expectation(fam, square);
  rep.sigma_lo2 = lower_expectation(fam, square);
  if (!(rep.sigma_hi2 > 0))
    throw std::invalid_argument("convergence report: family has zero upper second moment");
  const gpde::GNormalParams params(rep.sigma_lo2, rep.sigma_hi2);

  std::vector<double> limits;
  limits.reserve(funcs.size());
  for (const auto& tf : funcs) limits.push_back(gpde::gnormal_expectation(params, tf.fn, grid));

  for (std::size_t n : n_schedule) {
    for (std::size_t j = 0; j < funcs.size(); ++j) {
      const double dp_value = normalized_sum_expectation(fam, funcs[j].fn, n, state_cap);
      rep.rows.push_back({funcs[j].id, static_cast<std::int64_t>(n), dp_value, limits[j],
                          std::abs(dp_value - limits[j])});
    }
  }
  return rep;
}

double ConvergenceReport::max_gap(std::size_t n) const {
  double out = 0.0;
  bool seen = false;
  for (const auto& r : rows) {
    if (r.n == static_cast<std::int64_t>(n)) {
      out = std::max(out, r.gap);
      seen = true;
    }
  }
  if (!seen) throw std::invalid_argument("max_gap: no rows for n = " + std::to_string(n));
  return out;
}

Table ConvergenceReport::table() const {
  Table t({"phi", "n", "dp_value", "pde_value", "gap"});
  for (const auto& r : rows) t.add_row({r.phi, r.n, r.dp_value, r.pde_value, r.gap});
  return t;
}

LindebergReport lindeberg_array_check(
    const std::function<AmbiguitySet(std::size_t, std::size_t)>& entry,
    const std::vector<std::size_t>& n_schedule, double sigma_hi2, double sigma_lo2) {
  if (!entry) throw std::invalid_argument("array check: empty row accessor");
  if (n_schedule.size() < 2)
    throw std::invalid_argument("array check: needs at least two row sizes");
  for (std::size_t i = 1; i < n_schedule.size(); ++i)
    if (!(n_schedule[i] > n_schedule[i - 1]))
      throw std::invalid_argument("array check: row sizes must be strictly increasing");

  LindebergReport rep;
  for (std::size_t n : n_schedule) {
    if (n == 0) throw std::invalid_argument("array check: zero row size");
    double mean_sum = 0, align_sum = 0, third_sum = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const AmbiguitySet fam = entry(n, k);
      const double up = upper_expectation(fam, [](const double& v) { return v; });
      const double up_neg = upper_expectation(fam, [](const double& v) { return -v; });
      auto square = [](const double& v) { return v * v; };
      mean_sum += std::abs(up) + std::abs(up_neg);
      align_sum += std::abs(upper_expectation(fam, square) - sigma_hi2) +
                   std::abs(lower_expectation(fam, square) - sigma_lo2);
      third_sum += upper_expectation(fam, [](const double& v) { return std::abs(v * v * v); });
    }
    const double root = std::sqrt(static_cast<double>(n));
    rep.rows.push_back({static_cast<std::int64_t>(n), mean_sum / root,
                        align_sum / static_cast<double>(n), third_sum / (root * root * root)});
  }

  auto verdict = [&](auto field) {
    std::vector<double> trace;
    trace.reserve(rep.rows.size());
    for (const auto& r : rep.rows) trace.push_back(field(r));
    if (vanishes_outright(trace.back())) return Verdict::holds;
    for (std::size_t i = 1; i < trace.size(); ++i)
      if (trace[i] > trace[i - 1] + 1e-12) return Verdict::fails;
    return trace.back() <= 0.5 * trace.front() + 1e-12 ? Verdict::holds : Verdict::fails;
  };
  rep.means_vanish = verdict([](const LindebergRow& r) { return r.mean_sum; });
  rep.variances_align = verdict([](const LindebergRow& r) { return r.align_sum; });
  rep.third_vanishes = verdict([](const LindebergRow& r) { return r.third_sum; });
  return rep;
}

Table LindebergReport::table() const {
  Table t({"n", "mean_sum", "align_sum", "third_sum"});
  for (const auto& r : rows) t.add_row({r.n, r.mean_sum, r.align_sum, r.third_sum});
  return t;
}

}  // namespace subexp::clt
