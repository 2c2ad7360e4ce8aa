// End-to-end acceptance sweep. Each criterion prints exactly one PASS/FAIL
// line; the process exits nonzero if any line fails. Budget: well under ten
// minutes on a laptop, dominated by the drift-grid sweep and the wide-band
// comparison at n = 400.

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "subexp/axioms.hpp"
#include "subexp/clt.hpp"
#include "subexp/gpde.hpp"
#include "subexp/inequalities.hpp"
#include "subexp/series.hpp"
#include "subexp/table.hpp"
#include "subexp/test_functions.hpp"
#include "testutil.hpp"

namespace fs = std::filesystem;
using namespace subexp;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
}

template <class Fn>
void guarded(int id, Fn&& fn) {
  try {
    fn();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SUBEXP_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  return (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
}

void criterion_1_axioms() {
  const auto rep = run_axiom_suite(20260816, 1000);
  report(1, rep.ok() && rep.cases == 1000,
         "operator axioms: " + std::to_string(rep.cases) + " randomized cases, " +
             std::to_string(rep.checks) + " comparisons, " +
             std::to_string(rep.violations.size()) + " violations");
}

void criterion_2_engine_oracle() {
  Rng rng(87241);
  int instances = 0;
  double worst_value = 0, worst_replay = 0;
  while (instances < 500) {
    auto seq = testutil::random_sequence(rng);
    auto f = testutil::random_functional(rng, seq.size());
    const double up = dp::nested_expectation(seq, f);
    const double lo = dp::nested_lower_expectation(seq, f);
    worst_value = std::max(worst_value,
                           std::fabs(up - dp::brute_force_expectation(seq, f, true)));
    worst_value = std::max(worst_value,
                           std::fabs(lo - dp::brute_force_expectation(seq, f, false)));
    if (f.kind != dp::Kind::full_path) {
      auto pol = dp::extract_policy(seq, f);
      worst_replay = std::max(worst_replay, std::fabs(dp::replay_policy(seq, f, pol) - up));
    }
    ++instances;
  }
  report(2, worst_value <= 1e-10 && worst_replay <= 1e-10,
         "recursion vs enumeration on 500 instances: max value gap " + fmt_double(worst_value) +
             ", max replay gap " + fmt_double(worst_replay));
}

void criterion_3_reflection_grid() {
  const auto rep = ineq::levy_exhaustive_suite();
  report(3, rep.violations == 0 && rep.instances > 1000,
         "reflection bound grid: " + std::to_string(rep.instances) + " instances, " +
             std::to_string(rep.violations) + " violations");
}

void criterion_4_maximal_grids() {
  const auto rep = ineq::kolmogorov_exhaustive_suite();

  auto rcoin = dp::IndependentSequence<Rational>::iid(
      RationalAmbiguitySet(RationalSupport({Rational(-1), Rational(1)}),
                           {RationalLaw({Rational(1, 2), Rational(1, 2)})}),
      5);
  const auto coin = ineq::kolmogorov_check_i<Rational>(rcoin, Rational(1), Rational(1));
  const bool coin_exact = coin.lhs == Rational(3, 4) && coin.rhs == Rational(1, 5);

  report(4, rep.violations == 0 && rep.instances > 100 && coin_exact,
         "maximal bound grids: " + std::to_string(rep.instances) + " instances, " +
             std::to_string(rep.violations) + " violations; fair-coin (5,1,1) lhs 3/4, rhs 1/5: " +
             (coin_exact ? "exact" : "mismatch"));
}

void criterion_5_tail_ratio_stability() {
  const auto grid = ineq::rosenthal_grid_suite();
  const auto ra = ineq::rosenthal_random_suite(101, 500);
  const auto rb = ineq::rosenthal_random_suite(90210, 500);
  const double max_a = std::max(grid.max_ratio, ra.max_ratio);
  const double max_b = std::max(grid.max_ratio, rb.max_ratio);
  const bool ok = std::isfinite(max_a) && max_a == max_b;
  report(5, ok,
         "tail-to-variance ratio: suite max " + fmt_double(max_a) +
             " (seed 101) vs " + fmt_double(max_b) + " (seed 90210), argmax " + grid.argmax);
}

void criterion_6_series_diagnostics() {
  series::SequenceGenerator geo(testutil::coin(), series::ScaleKind::geometric, 0.5, 64);
  const auto conv = series::three_series_report(geo, 1.0, 30);
  const bool s3_limit = std::fabs(conv.last().s3 - 1.0 / 3.0) <= 1e-9;

  bool flat_zero = true;
  for (std::size_t m : {8u, 16u, 32u}) {
    const double eps = std::pow(2.0, -static_cast<double>(m) + 1.0);
    const auto rep = series::cauchy_capacity_diagnostic(geo, eps, {{m, 2 * m}});
    flat_zero = flat_zero && rep.rows[0].upper == 0.0 && rep.rows[0].lower == 0.0;
  }

  series::SequenceGenerator pow(testutil::coin(), series::ScaleKind::power, -0.5, 64);
  const auto div = series::three_series_report(pow, 1.0, 30);
  const bool s3_grows = div.last().s3 > 3.0;

  const auto moving = series::cauchy_capacity_diagnostic(pow, 0.5, {{8, 16}, {16, 32}, {32, 64}});
  bool floor = true;
  for (const auto& row : moving.rows) floor = floor && row.upper >= 0.1;

  report(6, s3_limit && flat_zero && s3_grows && floor,
         "series traces: geometric s3 -> " + fmt_double(conv.last().s3) +
             ", windows empty: " + (flat_zero ? "yes" : "no") + "; harmonic s3 " +
             fmt_double(div.last().s3) + ", window capacities >= 0.1: " + (floor ? "yes" : "no"));
}

double ramp_limit_error(const gpde::Solution& sol) {
  double worst = 0;
  for (std::size_t i = 0; i < sol.grid.nodes(); ++i) {
    const double x = sol.grid.node(i);
    if (std::fabs(x) > 4.0) continue;
    worst = std::max(worst, std::fabs(sol.final_field()[i] - gpde::gaussian_ramp_reference(x)));
  }
  return worst;
}

void criterion_7_collapsed_band_limit() {
  gpde::GNormalParams unit(1.0, 1.0);
  auto ramp = [](double s) { return std::clamp(s, -1.0, 1.0); };
  const gpde::Grid ref = gpde::Grid::reference();
  const double e_ref = ramp_limit_error(gpde::solve_g_heat(unit, ref, ramp));
  const double e_fine = ramp_limit_error(gpde::solve_g_heat(unit, ref.refined(), ramp));
  report(7, e_ref <= 1e-3 && e_fine * 2.5 <= e_ref,
         "collapsed band vs closed form: max node error " + fmt_double(e_ref) +
             ", refined " + fmt_double(e_fine) + " (factor " + fmt_double(e_ref / e_fine) + ")");
}

void criterion_8_band_moments() {
  gpde::GNormalParams p(0.25, 1.0);
  const gpde::Grid ref = gpde::Grid::reference();
  auto capped_square = [](double s) { return std::min(s * s, 36.0); };
  const double up = gpde::gnormal_expectation(p, capped_square, ref);
  const double neg = gpde::gnormal_expectation(p, [&](double s) { return -capped_square(s); }, ref);
  const bool ok = std::fabs(up - 1.0) <= 1e-3 && std::fabs(neg + 0.25) <= 1e-3;
  report(8, ok,
         "band second moments: upper " + fmt_double(up) + " vs 1, lower " + fmt_double(-neg) +
             " vs 0.25");
}

void criterion_9_copy_identity() {
  gpde::GNormalParams p(0.25, 1.0);
  auto ramp = [](double s) { return std::clamp(s, -1.0, 1.0); };
  const gpde::Grid ref = gpde::Grid::reference();
  const gpde::Grid fine = ref.refined();
  const std::vector<std::pair<double, double>> pairs{{1.0, 0.0}, {1.0, 1.0}, {0.6, 0.8}};
  double worst = 0;
  bool shrinks = true;
  for (const auto& [a, b] : pairs) {
    const double g_ref = gpde::independent_copy_check(p, ramp, a, b, ref).gap;
    const double g_fine = gpde::independent_copy_check(p, ramp, a, b, fine).gap;
    worst = std::max(worst, g_ref);
    shrinks = shrinks && g_fine <= g_ref + 1e-12;
  }
  report(9, worst <= 2e-3 && shrinks,
         "independent-copy identity: max gap " + fmt_double(worst) +
             " across three weight pairs, refinement non-increasing: " + (shrinks ? "yes" : "no"));
}

void criterion_10_band_convergence() {
  const auto fam = testutil::two_sigma_family();
  const auto rep =
      clt::clt_convergence_report(fam, standard_test_functions(), {25, 400}, gpde::Grid::reference());
  bool within = true, improves = true;
  double worst = 0;
  for (const auto& tf : standard_test_functions()) {
    double g25 = 0, g400 = 0;
    for (const auto& row : rep.rows) {
      if (row.phi != tf.id) continue;
      (row.n == 25 ? g25 : g400) = row.gap;
    }
    within = within && g400 <= 0.02;
    improves = improves && g400 < g25;
    worst = std::max(worst, g400);
  }
  report(10, within && improves,
         "normalized sums vs band law: max gap at n=400 is " + fmt_double(worst) +
             ", every probe improves on n=25: " + (improves ? "yes" : "no"));
}

void criterion_11_drift_exhibit() {
  AmbiguitySet shifted(Support({-0.9, 0.1, 1.1}),
                       {DiscreteLaw({0.125, 0.75, 0.125}), DiscreteLaw({0.5, 0.0, 0.5})});
  const auto rep =
      clt::clt_convergence_report(shifted, standard_test_functions(), {400}, gpde::Grid::reference());
  const double gap = rep.max_gap(400);
  report(11, gap >= 0.05,
         "drifting family keeps its distance: max gap at n=400 is " + fmt_double(gap));
}

void criterion_12_cli_reproducibility() {
  const fs::path dir = fs::temp_directory_path() / "subexp_acceptance_cli";
  fs::remove_all(dir);
  fs::create_directories(dir);

  {
    std::ofstream cfg(dir / "axioms.json");
    cfg << R"({"suite": "axioms", "seed": 42, "cases": 150})";
  }
  const int c1 = run_cli("run " + (dir / "axioms.json").string() + " --output-dir " +
                         (dir / "r1").string() + " > /dev/null 2>&1");
  const int c2 = run_cli("run " + (dir / "axioms.json").string() + " --output-dir " +
                         (dir / "r2").string() + " > /dev/null 2>&1");
  const std::string body1 = slurp(dir / "r1" / "axioms_violations.csv");
  const std::string body2 = slurp(dir / "r2" / "axioms_violations.csv");
  const bool identical = !body1.empty() && body1 == body2;

  {
    std::ofstream cfg(dir / "strict.json");
    cfg << R"({"suite": "clt", "family": "two_sigma", "n_schedule": [25],
               "tolerance": 1e-9, "conditions": false})";
  }
  const int c3 = run_cli("run " + (dir / "strict.json").string() + " --output-dir " +
                         (dir / "r3").string() + " > /dev/null 2>&1");

  const bool ok = c1 == 0 && c2 == 0 && identical && c3 == 1;
  report(12, ok,
         std::string("command line: repeated seeded run bytes ") +
             (identical ? "identical" : "differ") + ", exit codes " + std::to_string(c1) + "/" +
             std::to_string(c2) + " clean and " + std::to_string(c3) + " with violations");
}

}  // namespace

int main() {
  guarded(1, criterion_1_axioms);
  guarded(2, criterion_2_engine_oracle);
  guarded(3, criterion_3_reflection_grid);
  guarded(4, criterion_4_maximal_grids);
  guarded(5, criterion_5_tail_ratio_stability);
  guarded(6, criterion_6_series_diagnostics);
  guarded(7, criterion_7_collapsed_band_limit);
  guarded(8, criterion_8_band_moments);
  guarded(9, criterion_9_copy_identity);
  guarded(10, criterion_10_band_convergence);
  guarded(11, criterion_11_drift_exhibit);
  guarded(12, criterion_12_cli_reproducibility);

  std::printf("acceptance: %d/12 criteria passed\n", 12 - failures);
  return failures == 0 ? 0 : 1;
}
