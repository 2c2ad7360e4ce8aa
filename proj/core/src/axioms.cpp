#include "subexp/axioms.hpp"

#include <algorithm>
#include <iterator>
#include <utility>

#include "subexp/ambiguity.hpp"
#include "subexp/rng.hpp"

namespace subexp {

namespace {

struct CaseData {
  std::vector<Rational> support;           // strictly increasing
  std::vector<std::vector<Rational>> laws; // dyadic weights, each sums to 1
  std::vector<Rational> phi, psi;          // payoff vectors on the support
  std::vector<Rational> delta;             // nonnegative bump for monotonicity
  Rational lambda;                         // >= 0
  Rational shift;
  std::vector<std::size_t> event_a, event_b;  // sorted point-index subsets
};

std::vector<Rational> dyadic_weights(Rng& rng, std::size_t m) {
  // Composition of 64 into m nonnegative parts; sums to 1 exactly.
  std::vector<std::int64_t> raw(m, 0);
  for (int i = 0; i < 64; ++i) raw[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(m) - 1))]++;
  std::vector<Rational> w;
  w.reserve(m);
  for (auto r : raw) w.emplace_back(Rational(r) / 64);
  return w;
}

CaseData draw_case(Rng& rng) {
  CaseData c;
  const std::size_t m = static_cast<std::size_t>(rng.next_int(1, 4));
  // Distinct half-integers from {-3, -2.5, ..., 3}.
  std::vector<int> grid(13);
  for (int i = 0; i < 13; ++i) grid[i] = i - 6;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    auto j = static_cast<std::size_t>(rng.next_int(static_cast<std::int64_t>(i), 12));
    std::swap(grid[i], grid[j]);
  }
  std::vector<int> chosen(grid.begin(), grid.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(chosen.begin(), chosen.end());
  for (int g : chosen) c.support.emplace_back(Rational(g) / 2);

  const std::size_t k = static_cast<std::size_t>(rng.next_int(1, 3));
  for (std::size_t i = 0; i < k; ++i) c.laws.push_back(dyadic_weights(rng, m));

  auto draw_vec = [&](std::int64_t lo, std::int64_t hi) {
    std::vector<Rational> v;
    v.reserve(m);
    for (std::size_t i = 0; i < m; ++i) v.emplace_back(Rational(rng.next_int(lo, hi)) / 32);
    return v;
  };
  c.phi = draw_vec(-128, 128);
  c.psi = draw_vec(-128, 128);
  c.delta = draw_vec(0, 64);
  c.lambda = Rational(rng.next_int(0, 8)) / 4;
  c.shift = Rational(rng.next_int(-16, 16)) / 8;

  auto draw_event = [&]() {
    std::vector<std::size_t> ev;
    for (std::size_t i = 0; i < m; ++i)
      if (rng.next_int(0, 1) == 1) ev.push_back(i);
    return ev;
  };
  c.event_a = draw_event();
  c.event_b = draw_event();
  return c;
}

template <class S>
S conv(const Rational& q) {
  if constexpr (is_exact_scalar<S>) return q;
  else return to_double(q);
}

template <class S>
std::vector<S> conv_vec(const std::vector<Rational>& v) {
  std::vector<S> out;
  out.reserve(v.size());
  for (const auto& q : v) out.push_back(conv<S>(q));
  return out;
}

template <class S>
struct Recorder {
  std::size_t case_index;
  const char* mode;
  std::size_t* checks;
  std::vector<AxiomViolation>* violations;
  S slack = comparison_slack<S>();

  void le(const char* check, const S& lhs, const S& rhs) {
    ++*checks;
    if (!(lhs <= rhs + slack))
      violations->push_back({case_index, check, mode, to_double(lhs), to_double(rhs)});
  }
  void eq(const char* check, const S& lhs, const S& rhs) {
    ++*checks;
    if (!(scalar_abs(S(lhs - rhs)) <= slack))
      violations->push_back({case_index, check, mode, to_double(lhs), to_double(rhs)});
  }
};

template <class S>
void run_case(const CaseData& cd, std::size_t index, const char* mode, std::size_t& checks,
              std::vector<AxiomViolation>& violations) {
  using Fam = BasicAmbiguitySet<S>;
  std::vector<BasicDiscreteLaw<S>> laws;
  for (const auto& w : cd.laws) laws.emplace_back(conv_vec<S>(w));
  Fam fam(BasicSupport<S>(conv_vec<S>(cd.support)), std::move(laws));

  const auto phi = conv_vec<S>(cd.phi);
  const auto psi = conv_vec<S>(cd.psi);
  const auto delta = conv_vec<S>(cd.delta);
  const S lambda = conv<S>(cd.lambda);
  const S shift = conv<S>(cd.shift);
  const std::size_t m = phi.size();

  Recorder<S> rec{index, mode, &checks, &violations};

  const S e_phi = upper_expectation(fam, phi);
  const S e_psi = upper_expectation(fam, psi);
  const S l_phi = lower_expectation(fam, phi);

  // Monotonicity against a dominating payoff.
  std::vector<S> dominating(m);
  for (std::size_t i = 0; i < m; ++i) dominating[i] = S(phi[i] + delta[i]);
  rec.le("monotonic", e_phi, upper_expectation(fam, dominating));

  // Constants pass through untouched.
  rec.eq("constant", upper_expectation(fam, std::vector<S>(m, shift)), shift);

  // Sub-additivity of the upper operator.
  std::vector<S> sum(m);
  for (std::size_t i = 0; i < m; ++i) sum[i] = S(phi[i] + psi[i]);
  rec.le("subadditive", upper_expectation(fam, sum), S(e_phi + e_psi));

  // Positive homogeneity.
  std::vector<S> scaled(m);
  for (std::size_t i = 0; i < m; ++i) scaled[i] = S(lambda * phi[i]);
  rec.eq("homogeneous", upper_expectation(fam, scaled), S(lambda * e_phi));

  // Translation by a constant.
  std::vector<S> shifted(m);
  for (std::size_t i = 0; i < m; ++i) shifted[i] = S(phi[i] + shift);
  rec.eq("translation", upper_expectation(fam, shifted), S(e_phi + shift));

  // Conjugate operator: ordering and duality.
  rec.le("conjugate-order", l_phi, e_phi);
  std::vector<S> neg(m);
  for (std::size_t i = 0; i < m; ++i) neg[i] = S(-phi[i]);
  rec.eq("conjugate-dual", l_phi, S(-upper_expectation(fam, neg)));

  // Capacities: range, complement identity, union bounds.
  auto points_of = [&](const std::vector<std::size_t>& idx) {
    std::vector<S> pts;
    pts.reserve(idx.size());
    for (auto i : idx) pts.push_back(fam.support().points()[i]);
    return pts;
  };
  const auto ev_a = points_of(cd.event_a);
  const auto ev_b = points_of(cd.event_b);
  const auto cap_a = capacity(fam, ev_a);
  const auto cap_b = capacity(fam, ev_b);
  rec.le("capacity-bounds", S(0), cap_a.lower);
  rec.le("capacity-bounds", cap_a.lower, cap_a.upper);
  rec.le("capacity-bounds", cap_a.upper, S(1));
  rec.eq("capacity-complement", cap_a.lower,
         S(S(1) - capacity(fam, complement_event(fam.support(), ev_a)).upper));

  std::vector<std::size_t> union_idx;
  std::set_union(cd.event_a.begin(), cd.event_a.end(), cd.event_b.begin(), cd.event_b.end(),
                 std::back_inserter(union_idx));
  const auto cap_u = capacity(fam, points_of(union_idx));
  rec.le("capacity-subadditive", cap_u.upper, S(cap_a.upper + cap_b.upper));
  rec.le("capacity-mixed", cap_u.lower, S(cap_a.lower + cap_b.upper));

  // One law: the operators collapse to a classical expectation.
  if (fam.law_count() == 1) rec.eq("classical-singleton", e_phi, l_phi);
}

}  // namespace

AxiomSuiteReport run_axiom_suite(std::uint64_t seed, std::size_t cases) {
  AxiomSuiteReport report;
  report.seed = seed;
  report.cases = cases;
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const CaseData cd = draw_case(rng);
    run_case<Rational>(cd, i, "rational", report.checks, report.violations);
    run_case<double>(cd, i, "double", report.checks, report.violations);
  }
  return report;
}

}  // namespace subexp
