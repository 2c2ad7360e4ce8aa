#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "subexp/clt.hpp"
#include "testutil.hpp"

using namespace subexp;
using namespace subexp::clt;

namespace {

AmbiguitySet shifted_family() {
  return AmbiguitySet(Support({-0.9, 0.1, 1.1}),
                      {DiscreteLaw({0.125, 0.75, 0.125}), DiscreteLaw({0.5, 0.0, 0.5})});
}

const std::vector<double> cs{0.5, 1.0, 2.0, 4.0, 8.0};
const std::vector<double> xs{0.5, 1.0, 2.0, 4.0};

}  // namespace

TEST_CASE("family moment profile") {
  const auto prof = MomentProfile::from_family(testutil::two_sigma_family());
  CHECK(prof.exact);
  CHECK(prof.radius == 1.0);
  CHECK(prof.sigma_hi2 == 1.0);
  CHECK(prof.sigma_lo2 == 0.25);
  CHECK(prof.second_capped(1.0) == 1.0);
  CHECK(prof.second_capped(0.5) == 0.5);   // square capped at the level itself
  CHECK(prof.second_capped(8.0) == 1.0);   // saturates past the squared radius
  CHECK(prof.tail(0.5) == 1.0);
  CHECK(prof.tail(1.0) == 0.0);
  CHECK(prof.mean_trunc(2.0) == 0.0);
  CHECK(prof.mean_trunc_neg(2.0) == 0.0);
}

TEST_CASE("normalization audit accepts the centered family") {
  const auto prof = MomentProfile::from_family(testutil::two_sigma_family());
  const auto rep = clt_conditions(prof, cs, xs);
  CHECK(rep.moment_finite == Verdict::holds);
  CHECK(rep.tail_vanishes == Verdict::holds);
  CHECK(rep.mean_vanishes == Verdict::holds);
  CHECK(rep.all_hold());
  CHECK(rep.definitive);
  CHECK(rep.sigma_hi2 == 1.0);
  REQUIRE(rep.second_trace.size() == cs.size());
  REQUIRE(rep.tail_trace.size() == xs.size());
  CHECK(rep.second_trace.back() == 1.0);
  CHECK(rep.tail_trace.back() == 0.0);
  // long-format table: one row per trace entry
  CHECK(rep.table().row_count() == 3 * cs.size() + xs.size());
}

TEST_CASE("normalization audit flags a drifting family") {
  const auto prof = MomentProfile::from_family(shifted_family());
  const auto rep = clt_conditions(prof, cs, xs);
  CHECK(rep.moment_finite == Verdict::holds);
  CHECK(rep.tail_vanishes == Verdict::holds);
  CHECK(rep.mean_vanishes == Verdict::fails);  // truncated mean settles at 0.1
  CHECK_FALSE(rep.all_hold());
  CHECK(rep.definitive);
  CHECK(rep.mean_trace.back() == doctest::Approx(0.1).epsilon(1e-12));
}

TEST_CASE("audit schedules are validated") {
  const auto prof = MomentProfile::from_family(testutil::two_sigma_family());
  CHECK_THROWS_AS(clt_conditions(prof, {1.0, 2.0}, xs), std::invalid_argument);
  CHECK_THROWS_AS(clt_conditions(prof, {1.0, 2.0, 2.0}, xs), std::invalid_argument);
  CHECK_THROWS_AS(clt_conditions(prof, {-1.0, 1.0, 2.0}, xs), std::invalid_argument);
  CHECK_THROWS_AS(clt_conditions(prof, cs, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("normalized sums agree with direct enumeration") {
  const auto fam = testutil::two_sigma_family();
  auto ramp = [](double s) { return std::min(std::max(s, -1.0), 1.0); };
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    auto seq = dp::IndependentSequence<double>::iid(fam, n);
    auto f = dp::PathFunctional<double>::normalized_terminal(ramp);
    const double direct = normalized_sum_expectation(fam, ramp, n);
    CHECK(direct == dp::nested_expectation(seq, f));
    CHECK(direct == doctest::Approx(dp::brute_force_expectation(seq, f, true)).epsilon(1e-12));
  }
  // one draw: plain upper expectation, here of |X| under the spread law
  CHECK(normalized_sum_expectation(fam, [](double s) { return std::fabs(s); }, 1) == 1.0);
}

TEST_CASE("band comparison rows carry matching limits") {
  const auto fam = testutil::two_sigma_family();
  std::vector<TestFunction> probes{{"ramp", [](double s) { return std::clamp(s, -1.0, 1.0); }, 1.0}};
  const auto rep = clt_convergence_report(fam, probes, {25}, gpde::Grid::reference());
  CHECK(rep.sigma_hi2 == 1.0);
  CHECK(rep.sigma_lo2 == 0.25);
  REQUIRE(rep.rows.size() == 1);
  const auto& row = rep.rows[0];
  CHECK(row.phi == "ramp");
  CHECK(row.n == 25);
  CHECK(row.gap == std::fabs(row.dp_value - row.pde_value));
  CHECK(row.gap <= 2e-3);  // n = 25 already sits close to the band limit
  CHECK(rep.max_gap(25) == row.gap);
}

TEST_CASE("degenerate families are rejected by the comparison") {
  AmbiguitySet point(Support({0.0}), {DiscreteLaw({1.0})});
  std::vector<TestFunction> probes{{"ramp", [](double s) { return std::clamp(s, -1.0, 1.0); }, 1.0}};
  CHECK_THROWS_AS(clt_convergence_report(point, probes, {4}, gpde::Grid::reference()),
                  std::invalid_argument);
}

TEST_CASE("triangular-array audit passes an iid centered array") {
  const auto fam = testutil::two_sigma_family();
  auto entry = [&fam](std::size_t, std::size_t) { return fam; };
  const auto rep = lindeberg_array_check(entry, {4, 16, 64}, 1.0, 0.25);
  CHECK(rep.means_vanish == Verdict::holds);
  CHECK(rep.variances_align == Verdict::holds);
  CHECK(rep.third_vanishes == Verdict::holds);
  CHECK(rep.all_hold());
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].mean_sum == 0.0);
  CHECK(rep.rows[0].align_sum == 0.0);
  // third trace scales as n^{-1/2}
  CHECK(rep.rows[0].third_sum == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(rep.rows[2].third_sum == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("triangular-array audit flags drift and band mismatch") {
  auto drifting = [](std::size_t, std::size_t) { return shifted_family(); };
  const auto drift_rep = lindeberg_array_check(drifting, {4, 16, 64}, 1.01, 0.26);
  CHECK(drift_rep.means_vanish == Verdict::fails);

  const auto fam = testutil::two_sigma_family();
  auto centered = [&fam](std::size_t, std::size_t) { return fam; };
  const auto band_rep = lindeberg_array_check(centered, {4, 16, 64}, 0.5, 0.25);
  CHECK(band_rep.variances_align == Verdict::fails);
}

TEST_CASE("triangular-array audit validates the row schedule") {
  const auto fam = testutil::two_sigma_family();
  auto entry = [&fam](std::size_t, std::size_t) { return fam; };
  CHECK_THROWS_AS(lindeberg_array_check(entry, {16}, 1.0, 0.25), std::invalid_argument);
  CHECK_THROWS_AS(lindeberg_array_check(entry, {16, 16}, 1.0, 0.25), std::invalid_argument);
}
