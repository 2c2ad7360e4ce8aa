#include "subexp/series.hpp"

#include <cmath>
#include <stdexcept>

namespace subexp::series {

SequenceGenerator::SequenceGenerator(AmbiguitySet base, ScaleKind kind, double param,
                                     std::size_t horizon)
    : base_(std::move(base)), kind_(kind), param_(param), horizon_(horizon) {
  if (horizon_ == 0) throw std::invalid_argument("sequence generator: zero horizon");
  if (!std::isfinite(param_))
    throw std::invalid_argument("sequence generator: scale parameter must be finite");
  // Power exponents may be negative (decaying steps); ratios and constants
  // must themselves be positive scales.
  if (kind_ != ScaleKind::power && !(param_ > 0))
    throw std::invalid_argument("sequence generator: scale parameter must be positive");
}

double SequenceGenerator::scale_at(std::size_t k) const {
  if (k == 0 || k > horizon_)
    throw std::out_of_range("sequence generator: index " + std::to_string(k) +
                            " outside 1.." + std::to_string(horizon_));
  switch (kind_) {
    case ScaleKind::geometric: return std::pow(param_, static_cast<double>(k));
    case ScaleKind::power: return std::pow(static_cast<double>(k), param_);
    case ScaleKind::constant: return param_;
  }
  return param_;  // unreachable
}

AmbiguitySet SequenceGenerator::factor(std::size_t k) const { return scale(base_, scale_at(k)); }

dp::IndependentSequence<double> SequenceGenerator::prefix(std::size_t n) const {
  return window(0, n);
}

dp::IndependentSequence<double> SequenceGenerator::window(std::size_t m, std::size_t n) const {
  if (!(m < n) || n > horizon_)
    throw std::invalid_argument("sequence generator: window needs m < n <= horizon");
  std::vector<AmbiguitySet> factors;
  factors.reserve(n - m);
  for (std::size_t k = m + 1; k <= n; ++k) factors.push_back(factor(k));
  return dp::IndependentSequence<double>(std::move(factors));
}

ThreeSeriesReport three_series_report(const SequenceGenerator& gen, double c, std::size_t count) {
  if (!(c > 0)) throw std::invalid_argument("three-series: truncation level must be positive");
  if (count == 0 || count > gen.horizon())
    throw std::invalid_argument("three-series: count outside 1..horizon");
  ThreeSeriesReport rep;
  rep.c = c;
  double s1 = 0, s2u = 0, s2l = 0, s3 = 0;
  for (std::size_t n = 1; n <= count; ++n) {
    const AmbiguitySet fam = gen.factor(n);
    const auto tail_event = threshold_event(fam.support(), Rel::abs_gt, c);
    const double t1 = capacity(fam, tail_event).upper;

    const AmbiguitySet trunc = truncate(fam, c);
    const double t2u = upper_expectation(trunc, [](const double& v) { return v; });
    const double t2l = upper_expectation(trunc, [](const double& v) { return -v; });
    const double t3 = upper_expectation(
        trunc, [t2u](const double& v) { return (v - t2u) * (v - t2u); });

    s1 += t1;
    s2u += t2u;
    s2l += t2l;
    s3 += t3;
    rep.rows.push_back(
        {static_cast<std::int64_t>(n), t1, t2u, t2l, t3, s1, s2u, s2l, s3});
  }
  return rep;
}

Table ThreeSeriesReport::table() const {
  Table t({"n", "s1_term", "s2_upper_term", "s2_lower_term", "s3_term", "s1", "s2_upper",
           "s2_lower", "s3"});
  for (const auto& r : rows) {
    t.add_row({r.n, r.s1_term, r.s2_upper_term, r.s2_lower_term, r.s3_term, r.s1, r.s2_upper,
               r.s2_lower, r.s3});
  }
  return t;
}

CauchyReport cauchy_capacity_diagnostic(const SequenceGenerator& gen, double eps,
                                        const std::vector<std::pair<std::size_t, std::size_t>>& pairs,
                                        std::size_t state_cap) {
  if (!(eps > 0)) throw std::invalid_argument("window diagnostic: eps must be positive");
  CauchyReport rep;
  for (const auto& [m, n] : pairs) {
    const auto seq = gen.window(m, n);
    dp::PathEvent<double> ev;
    ev.kind = dp::Kind::terminal_sum;
    ev.rel = Rel::abs_ge;
    ev.threshold = eps;
    const auto cap = dp::path_capacity(seq, ev, state_cap);
    rep.rows.push_back({static_cast<std::int64_t>(m), static_cast<std::int64_t>(n), eps,
                        cap.upper, cap.lower});
  }
  return rep;
}

Table CauchyReport::table() const {
  Table t({"m", "n", "eps", "upper", "lower"});
  for (const auto& r : rows) t.add_row({r.m, r.n, r.eps, r.upper, r.lower});
  return t;
}

DistributionReport distribution_diagnostic(const SequenceGenerator& gen,
                                           const std::vector<TestFunction>& funcs,
                                           const std::vector<std::size_t>& checkpoints,
                                           std::size_t state_cap) {
  if (funcs.empty()) throw std::invalid_argument("distribution diagnostic: no test functions");
  if (checkpoints.empty()) throw std::invalid_argument("distribution diagnostic: no checkpoints");
  DistributionReport rep;
  for (const auto& tf : funcs) {
    double prev = 0;
    bool first = true;
    for (std::size_t n : checkpoints) {
      const auto f = dp::PathFunctional<double>::terminal(tf.fn);
      const double value = dp::nested_expectation(gen.prefix(n), f, state_cap);
      rep.rows.push_back({tf.id, static_cast<std::int64_t>(n), value, first ? 0.0 : value - prev});
      prev = value;
      first = false;
    }
  }
  return rep;
}

Table DistributionReport::table() const {
  Table t({"phi", "n", "value", "step"});
  for (const auto& r : rows) t.add_row({r.phi, r.n, r.value, r.step});
  return t;
}

}  // namespace subexp::series
