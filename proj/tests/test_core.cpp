#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>

#include "subexp/ambiguity.hpp"
#include "subexp/rng.hpp"
#include "testutil.hpp"

using namespace subexp;

TEST_CASE("support requires strictly increasing points") {
  CHECK_THROWS_AS(Support({}), std::invalid_argument);
  CHECK_THROWS_AS(Support({0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(Support({1.0, -1.0}), std::invalid_argument);
  try {
    Support({-1.0, 0.5, 0.5});
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("point 2") != std::string::npos);
  }
  CHECK(Support({-1.0, 0.0, 1.0}).radius() == 1.0);
  CHECK(Support({-3.0, 0.0, 1.0}).radius() == 3.0);
}

TEST_CASE("law weights validated") {
  CHECK_THROWS_AS(DiscreteLaw({0.5, -0.5, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(DiscreteLaw({0.4, 0.5}), std::invalid_argument);
  try {
    DiscreteLaw({0.4, 0.5});
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("sum") != std::string::npos);
  }
  // a third split sums to 1 only within rounding; the double validator allows it
  CHECK_NOTHROW(DiscreteLaw({1.0 / 3, 1.0 / 3, 1.0 / 3}));
  // exact mode has no slack at all
  CHECK_NOTHROW(RationalLaw({Rational(1) / 3, Rational(1) / 3, Rational(1) / 3}));
  CHECK_THROWS_AS(RationalLaw({Rational(1) / 3, Rational(1) / 3, Rational(1) / 3 + Rational(1, 1000000000)}),
                  std::invalid_argument);
}

TEST_CASE("ambiguity set shape checks") {
  CHECK_THROWS_AS(AmbiguitySet(Support({0.0, 1.0}), {}), std::invalid_argument);
  CHECK_THROWS_AS(AmbiguitySet(Support({0.0, 1.0}), {DiscreteLaw({1.0})}), std::invalid_argument);
}

TEST_CASE("upper and lower expectation over a family") {
  auto fam = testutil::two_sigma_family();
  // second moment: law means are 1/4 and 1
  auto sq = [](const double& x) { return x * x; };
  CHECK(upper_expectation(fam, sq) == 1.0);
  CHECK(lower_expectation(fam, sq) == 0.25);
  auto [val, arg] = upper_expectation_argmax<double>(fam, std::vector<double>{1.0, 0.0, 1.0});
  CHECK(val == 1.0);
  CHECK(arg == 1);
  // ties resolve to the lowest law index
  auto [v2, a2] = upper_expectation_argmax<double>(fam, std::vector<double>{0.0, 0.0, 0.0});
  CHECK(v2 == 0.0);
  CHECK(a2 == 0);
  // conjugation
  auto neg_sq = [](const double& x) { return -x * x; };
  CHECK(lower_expectation(fam, sq) == -upper_expectation(fam, neg_sq));
  CHECK(upper_expectation(fam, std::vector<double>{2.0, 1.0, 0.5}) ==
        doctest::Approx(0.5 * 2 + 0.5 * 0.5).epsilon(1e-15));
}

TEST_CASE("capacities from events") {
  auto fam = testutil::two_sigma_family();
  auto ev = threshold_event(fam.support(), Rel::ge, 0.0);  // {0, 1}
  REQUIRE(ev.size() == 2);
  auto cap = capacity(fam, ev);
  CHECK(cap.upper == 0.875);  // law with weight 3/4 on 0 plus 1/8 on 1
  CHECK(cap.lower == 0.5);
  // complement identity: v(A) = 1 - V(A^c)
  auto comp = complement_event(fam.support(), ev);
  auto ccap = capacity(fam, comp);
  CHECK(cap.lower == 1.0 - ccap.upper);
  CHECK(cap.upper == 1.0 - ccap.lower);
  // strictness changes membership exactly at the threshold
  auto strict = threshold_event(fam.support(), Rel::gt, 0.0);
  CHECK(strict.size() == 1);
  CHECK_THROWS_AS(capacity(fam, std::vector<double>{0.25}), std::invalid_argument);
}

TEST_CASE("threshold relations") {
  CHECK(rel_holds(Rel::gt, 1.0, 1.0) == false);
  CHECK(rel_holds(Rel::ge, 1.0, 1.0) == true);
  CHECK(rel_holds(Rel::abs_gt, -2.0, 1.0) == true);
  CHECK(rel_holds(Rel::abs_ge, -1.0, 1.0) == true);
  CHECK(rel_holds(Rel::abs_gt, -1.0, 1.0) == false);
  CHECK(rel_holds(Rel::lt, 0.5, 1.0) == true);
  CHECK(rel_holds(Rel::le, 1.0, 1.0) == true);
}

TEST_CASE("truncation clips and merges support points") {
  AmbiguitySet fam(Support({-2.0, -1.0, 0.0, 1.0, 2.0}),
                   {DiscreteLaw({0.25, 0.25, 0.0, 0.25, 0.25}),
                    DiscreteLaw({0.0, 0.5, 0.5, 0.0, 0.0})});
  auto t = truncate(fam, 1.0);
  REQUIRE(t.support().size() == 3);
  CHECK(t.support()[0] == -1.0);
  CHECK(t.support()[2] == 1.0);
  CHECK(t.law(0).weights() == std::vector<double>{0.5, 0.0, 0.5});
  CHECK(t.law(1).weights() == std::vector<double>{0.5, 0.5, 0.0});

  auto half = truncate(fam, 1.5);
  REQUIRE(half.support().size() == 5);
  CHECK(half.support()[0] == -1.5);
  CHECK(half.support()[4] == 1.5);

  // truncating beyond the radius is the identity
  auto same = truncate(fam, 2.5);
  CHECK(same.support().points() == fam.support().points());
  CHECK(same.law(0).weights() == fam.law(0).weights());

  CHECK_THROWS_AS(truncate(fam, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(truncate(fam, -1.0), std::invalid_argument);
}

TEST_CASE("rational truncation merges exactly") {
  RationalAmbiguitySet fam(
      RationalSupport({Rational(-2), Rational(0), Rational(2)}),
      {RationalLaw({Rational(1) / 3, Rational(1) / 3, Rational(1) / 3})});
  auto t = truncate(fam, Rational(1));
  REQUIRE(t.support().size() == 3);
  CHECK(t.law(0).weights()[0] == Rational(1) / 3);
  CHECK(upper_expectation(t, [](const Rational& x) { return x; }) == Rational(0));
}

TEST_CASE("scaling a family") {
  auto fam = testutil::coin();
  auto s = scale(fam, 0.25);
  CHECK(s.support()[0] == -0.25);
  CHECK(s.support()[1] == 0.25);
  CHECK_THROWS_AS(scale(fam, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scale(fam, -2.0), std::invalid_argument);
}

TEST_CASE("singleton family reduces to the classical expectation") {
  AmbiguitySet fam(Support({-1.0, 0.0, 2.0}), {DiscreteLaw({0.25, 0.25, 0.5})});
  auto id = [](const double& x) { return x; };
  const double classical = -0.25 + 1.0;
  CHECK(upper_expectation(fam, id) == classical);
  CHECK(lower_expectation(fam, id) == classical);
}

TEST_CASE("counter rng is reproducible and seed sensitive") {
  Rng a(7), b(7), c(8);
  for (int i = 0; i < 100; ++i) {
    auto x = a.next_u64();
    CHECK(x == b.next_u64());
  }
  CHECK(a.next_u64() != c.next_u64());
  Rng d(123);
  for (int i = 0; i < 1000; ++i) {
    const double u = d.next_real();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    const auto k = d.next_int(-3, 3);
    CHECK(k >= -3);
    CHECK(k <= 3);
  }
}
