#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "subexp/series.hpp"
#include "subexp/test_functions.hpp"
#include "testutil.hpp"

using namespace subexp;
using namespace subexp::series;

TEST_CASE("generator scales and windows") {
  SequenceGenerator geo(testutil::coin(), ScaleKind::geometric, 0.5, 64);
  CHECK(geo.scale_at(1) == 0.5);
  CHECK(geo.scale_at(3) == 0.125);
  CHECK(geo.prefix(5).size() == 5);
  CHECK(geo.window(8, 16).size() == 8);
  // factor 2 lives on {-1/4, 1/4}
  CHECK(geo.factor(2).support().points() == std::vector<double>{-0.25, 0.25});

  SequenceGenerator pow(testutil::coin(), ScaleKind::power, -0.5, 64);
  CHECK(pow.scale_at(4) == 0.5);
  CHECK(pow.scale_at(1) == 1.0);

  SequenceGenerator con(testutil::coin(), ScaleKind::constant, 2.0, 8);
  CHECK(con.scale_at(7) == 2.0);
}

TEST_CASE("generator validation") {
  CHECK_THROWS_AS(SequenceGenerator(testutil::coin(), ScaleKind::geometric, 0.0, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(SequenceGenerator(testutil::coin(), ScaleKind::constant, -1.0, 8),
                  std::invalid_argument);
  CHECK_THROWS_AS(SequenceGenerator(testutil::coin(), ScaleKind::geometric, 0.5, 0),
                  std::invalid_argument);

  SequenceGenerator gen(testutil::coin(), ScaleKind::geometric, 0.5, 8);
  CHECK_THROWS_AS(gen.scale_at(0), std::out_of_range);
  CHECK_THROWS_AS(gen.scale_at(9), std::out_of_range);
  CHECK_THROWS_AS(gen.window(3, 3), std::invalid_argument);
  CHECK_THROWS_AS(gen.window(0, 9), std::invalid_argument);
}

TEST_CASE("summability traces: geometric steps converge") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::geometric, 0.5, 64);
  const auto rep = three_series_report(gen, 1.0, 30);
  REQUIRE(rep.rows.size() == 30);
  const auto& last = rep.last();
  // steps stay below the truncation level and are symmetric
  CHECK(last.s1 == 0.0);
  CHECK(last.s2_upper == 0.0);
  CHECK(last.s2_lower == 0.0);
  // quadratic series sums to 1/3 in the limit
  CHECK(std::fabs(last.s3 - 1.0 / 3.0) <= 1e-9);
  // term trace is the geometric sequence 4^-n
  CHECK(rep.rows[0].s3_term == 0.25);
  CHECK(rep.rows[1].s3_term == 0.0625);
}

TEST_CASE("summability traces: harmonic quadratic series diverges") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::power, -0.5, 64);
  const auto rep = three_series_report(gen, 1.0, 30);
  const auto& last = rep.last();
  CHECK(last.s1 == 0.0);
  CHECK(last.s2_upper == 0.0);
  // partial harmonic sum H_30
  CHECK(last.s3 == doctest::Approx(3.9949871309203906).epsilon(1e-12));
  CHECK(last.s3 > 3.0);
}

TEST_CASE("three-series validation") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::geometric, 0.5, 8);
  CHECK_THROWS_AS(three_series_report(gen, 0.0, 4), std::invalid_argument);
  CHECK_THROWS_AS(three_series_report(gen, 1.0, 9), std::invalid_argument);
  CHECK_THROWS_AS(three_series_report(gen, 1.0, 0), std::invalid_argument);
}

TEST_CASE("window deviation capacities: convergent tail is flat zero") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::geometric, 0.5, 64);
  // |S_16 - S_8| <= 2^-8 - 2^-16 < 2^-7, so the event is empty
  const auto rep = cauchy_capacity_diagnostic(gen, 0.0078125, {{8, 16}, {16, 32}});
  REQUIRE(rep.rows.size() == 2);
  for (const auto& row : rep.rows) {
    CHECK(row.upper == 0.0);
    CHECK(row.lower == 0.0);
  }
}

TEST_CASE("window deviation capacities: divergent steps keep mass moving") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::power, -0.5, 64);
  const auto rep = cauchy_capacity_diagnostic(gen, 0.5, {{8, 16}, {32, 64}});
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].upper == 0.640625);
  CHECK(rep.rows[0].upper == rep.rows[0].lower);  // single-law factors
  // the 32-step window runs through the product-measure split
  CHECK(rep.rows[1].upper == doctest::Approx(0.5628205761313438).epsilon(1e-15));
  CHECK(rep.rows[1].upper >= 0.1);
}

TEST_CASE("product split and lattice agree on a mid-size window") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::power, -0.5, 64);
  // 2^8 joint states: comfortably exact for both evaluation routes
  const auto wide = cauchy_capacity_diagnostic(gen, 0.5, {{8, 16}}, dp::default_state_cap);
  const auto tight = cauchy_capacity_diagnostic(gen, 0.5, {{8, 16}}, /*state_cap=*/64);
  CHECK(wide.rows[0].upper == tight.rows[0].upper);
  CHECK(wide.rows[0].lower == tight.rows[0].lower);
}

TEST_CASE("distributional checkpoints stabilize for geometric steps") {
  SequenceGenerator gen(testutil::coin(), ScaleKind::geometric, 0.5, 64);
  const auto funcs = standard_test_functions();
  const auto rep = distribution_diagnostic(gen, funcs, {4, 8, 12});
  REQUIRE(rep.rows.size() == funcs.size() * 3);
  for (std::size_t f = 0; f < funcs.size(); ++f) {
    const auto& first = rep.rows[f * 3];
    const auto& mid = rep.rows[f * 3 + 1];
    const auto& last = rep.rows[f * 3 + 2];
    CHECK(first.step == 0.0);
    CHECK(first.phi == funcs[f].id);
    CHECK(last.n == 12);
    // tail windows move the sum by at most 2^-4 and 2^-8
    CHECK(std::fabs(mid.step) <= 0.0625 + 1e-15);
    CHECK(std::fabs(last.step) <= 0.00390625 + 1e-15);
  }
}
