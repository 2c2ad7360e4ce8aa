#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace subexp {

struct AxiomViolation {
  std::size_t case_index;
  std::string check;   // e.g. "subadditive", "capacity-complement"
  std::string mode;    // "rational" or "double"
  double lhs, rhs;     // the two sides that failed to compare
};

struct AxiomSuiteReport {
  std::uint64_t seed = 0;
  std::size_t cases = 0;
  std::size_t checks = 0;  // individual comparisons across both modes
  std::vector<AxiomViolation> violations;
  bool ok() const noexcept { return violations.empty(); }
};

/**
 * Randomized structural audit of the upper-expectation operators.
 *
 * Each case draws a family with dyadic weights and half-integer support, two
 * payoff vectors, a scalar factor, a shift and two events, then verifies:
 * monotonicity, constant preservation, sub-additivity, positive homogeneity,
 * translation invariance, conjugate duality and ordering, capacity bounds and
 * complement identity, upper/lower union sub-additivity, and agreement of the
 * two operators on one-law families. Every case runs twice: exact rational
 * arithmetic with zero slack, then the same data in doubles with slack 1e-12.
 */
AxiomSuiteReport run_axiom_suite(std::uint64_t seed, std::size_t cases);

}  // namespace subexp
