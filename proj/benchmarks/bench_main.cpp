#include <benchmark/benchmark.h>

#include <algorithm>
#include <cmath>

#include "subexp/clt.hpp"
#include "subexp/dp.hpp"
#include "subexp/gpde.hpp"
#include "subexp/inequalities.hpp"

namespace {

using namespace subexp;

AmbiguitySet two_sigma() {
  return AmbiguitySet(Support({-1.0, 0.0, 1.0}),
                      {DiscreteLaw({0.125, 0.75, 0.125}), DiscreteLaw({0.5, 0.0, 0.5})});
}

// Backward recursion cost grows with the reachable sum lattice: O(n^2) states
// on an integer support.
void bm_nested_expectation(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto fam = two_sigma();
  auto seq = dp::IndependentSequence<double>::iid(fam, n);
  auto f = dp::PathFunctional<double>::normalized_terminal(
      [](double s) { return std::clamp(s, -1.0, 1.0); });
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp::nested_expectation(seq, f));
  }
  state.SetComplexityN(static_cast<benchmark::IterationCount>(n));
}
BENCHMARK(bm_nested_expectation)->Arg(25)->Arg(100)->Arg(400)->Complexity();

void bm_running_max_capacity(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  auto seq = dp::IndependentSequence<double>::iid(two_sigma(), n);
  dp::PathEvent<double> ev{dp::Kind::running_max_abs, {}, Rel::gt, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dp::upper_path_capacity(seq, ev));
  }
}
BENCHMARK(bm_running_max_capacity)->Arg(8)->Arg(16)->Arg(32);

// One exact-arithmetic drift-grid instance, the unit of work behind the
// exhaustive reflection sweep.
void bm_reflection_check_exact(benchmark::State& state) {
  RationalAmbiguitySet fam(
      RationalSupport({Rational(-1), Rational(0), Rational(1)}),
      {RationalLaw({Rational(1, 8), Rational(3, 4), Rational(1, 8)}),
       RationalLaw({Rational(1, 2), Rational(0), Rational(1, 2)})});
  auto seq = dp::IndependentSequence<Rational>::iid(fam, 4);
  std::vector<Rational> beta(4, Rational(1, 2));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        ineq::levy_check<Rational>(seq, beta, Rational(1), Rational(1, 2), false));
  }
}
BENCHMARK(bm_reflection_check_exact);

void bm_g_heat_reference(benchmark::State& state) {
  gpde::GNormalParams p(0.25, 1.0);
  const auto grid = gpde::Grid::reference();
  auto ramp = [](double s) { return std::clamp(s, -1.0, 1.0); };
  for (auto _ : state) {
    benchmark::DoNotOptimize(gpde::solve_g_heat(p, grid, ramp).value_at_zero());
  }
}
BENCHMARK(bm_g_heat_reference)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
