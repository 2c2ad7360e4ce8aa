#include "subexp/inequalities.hpp"

#include <array>

#include "subexp/rng.hpp"

namespace subexp::ineq {

namespace {

using RSeq = dp::IndependentSequence<Rational>;

struct GridFamily {
  std::string support_id, family_id;
  RationalAmbiguitySet fam;
};

std::string join_ids(const std::vector<std::string>& parts, char sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

/**
 * The grid pool: every non-empty support contained in {-1, 0, 1}, laws drawn
 * from {uniform, mass at the min point, mass at the max point} plus two
 * centered laws of distinct variance on the full three-point support.
 * Families are the singletons and unordered pairs of the per-support pool.
 */
std::vector<GridFamily> grid_families() {
  std::vector<GridFamily> out;
  const std::array<Rational, 3> base = {Rational(-1), Rational(0), Rational(1)};
  for (unsigned mask = 1; mask < 8; ++mask) {
    std::vector<Rational> pts;
    std::vector<std::string> pt_ids;
    for (unsigned b = 0; b < 3; ++b) {
      if (mask & (1u << b)) {
        pts.push_back(base[b]);
        pt_ids.push_back(fmt_double(to_double(base[b])));
      }
    }
    const std::size_t m = pts.size();
    const std::string support_id = join_ids(pt_ids, '|');

    struct PoolLaw {
      std::string id;
      std::vector<Rational> w;
    };
    std::vector<PoolLaw> pool;
    auto push = [&](std::string id, std::vector<Rational> w) {
      for (const auto& p : pool)
        if (p.w == w) return;
      pool.push_back({std::move(id), std::move(w)});
    };
    push("u", std::vector<Rational>(m, Rational(1) / static_cast<int>(m)));
    {
      std::vector<Rational> lo(m, Rational(0));
      lo.front() = 1;
      push("lo", std::move(lo));
      std::vector<Rational> hi(m, Rational(0));
      hi.back() = 1;
      push("hi", std::move(hi));
    }
    if (mask == 7) {
      push("s14", {Rational(1, 8), Rational(3, 4), Rational(1, 8)});
      push("s1", {Rational(1, 2), Rational(0), Rational(1, 2)});
    }

    RationalSupport support(pts);
    auto make = [&](std::vector<std::size_t> idx) {
      std::vector<RationalLaw> laws;
      std::vector<std::string> ids;
      for (auto i : idx) {
        laws.emplace_back(pool[i].w);
        ids.push_back(pool[i].id);
      }
      out.push_back({support_id, join_ids(ids, '+'),
                     RationalAmbiguitySet(support, std::move(laws))});
    };
    for (std::size_t i = 0; i < pool.size(); ++i) make({i});
    for (std::size_t i = 0; i < pool.size(); ++i)
      for (std::size_t j = i + 1; j < pool.size(); ++j) make({i, j});
  }
  return out;
}

Rational upper_mean(const RationalAmbiguitySet& fam) {
  return upper_expectation(fam, [](const Rational& v) { return v; });
}

Rational upper_square(const RationalAmbiguitySet& fam) {
  return upper_expectation(fam, [](const Rational& v) { return Rational(v * v); });
}

}  // namespace

LevySuiteReport levy_exhaustive_suite() {
  LevySuiteReport rep;
  const auto families = grid_families();
  const std::array<Rational, 3> beta_vals = {Rational(0), Rational(1, 2), Rational(-1, 2)};
  const std::array<const char*, 3> beta_ids = {"0", "0.5", "-0.5"};
  const std::array<Rational, 3> xs = {Rational(1, 2), Rational(1), Rational(3, 2)};
  const std::array<Rational, 2> epss = {Rational(1, 4), Rational(1, 2)};

  for (const auto& gf : families) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto seq = RSeq::iid(gf.fam, n);
      std::size_t combos = 1;
      for (std::size_t i = 0; i < n; ++i) combos *= beta_vals.size();
      for (std::size_t combo = 0; combo < combos; ++combo) {
        std::vector<Rational> beta(n);
        std::vector<std::string> bid(n);
        std::size_t rem = combo;
        for (std::size_t i = 0; i < n; ++i) {
          beta[i] = beta_vals[rem % 3];
          bid[i] = beta_ids[rem % 3];
          rem /= 3;
        }
        const std::string beta_id = join_ids(bid, '|');
        for (bool absolute : {false, true}) {
          for (const auto& x : xs) {
            for (const auto& eps : epss) {
              const auto r = levy_check<Rational>(seq, beta, x, eps, absolute);
              ++rep.instances;
              if (!r.holds) ++rep.violations;
              rep.rows.push_back({gf.support_id, gf.family_id, beta_id,
                                  static_cast<std::int64_t>(n), absolute ? "abs" : "gt",
                                  to_double(x), to_double(eps), to_double(r.alpha),
                                  to_double(r.max_capacity), to_double(r.lhs), to_double(r.rhs),
                                  r.holds});
            }
          }
        }
      }
    }
  }
  return rep;
}

Table LevySuiteReport::table() const {
  Table t({"support", "family", "beta", "n", "form", "x", "eps", "alpha", "max_capacity", "lhs",
           "rhs", "holds"});
  for (const auto& r : rows) {
    t.add_row({r.support, r.family, r.beta, r.n, r.form, r.x, r.eps, r.alpha, r.max_capacity,
               r.lhs, r.rhs, std::int64_t(r.holds ? 1 : 0)});
  }
  return t;
}

KolmogorovSuiteReport kolmogorov_exhaustive_suite() {
  KolmogorovSuiteReport rep;
  const auto families = grid_families();
  const std::array<Rational, 3> xs = {Rational(1, 2), Rational(1), Rational(3, 2)};
  const std::array<Rational, 2> cs = {Rational(1), Rational(2)};

  for (const auto& gf : families) {
    const Rational sq = upper_square(gf.fam);
    const Rational mean = upper_mean(gf.fam);
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto seq = RSeq::iid(gf.fam, n);
      for (const auto& x : xs) {
        for (const auto& c : cs) {
          if (sq > 0) {
            const auto r = kolmogorov_check_i<Rational>(seq, x, c);
            ++rep.instances;
            if (!r.holds) ++rep.violations;
            rep.rows.push_back({gf.support_id, gf.family_id, static_cast<std::int64_t>(n),
                                "max_abs", to_double(x), to_double(c), to_double(r.lhs),
                                to_double(r.rhs), r.holds});
          } else {
            ++rep.skipped;
          }
          if (mean > 0) {
            const auto r = kolmogorov_check_ii<Rational>(seq, x, c);
            ++rep.instances;
            if (!r.holds) ++rep.violations;
            rep.rows.push_back({gf.support_id, gf.family_id, static_cast<std::int64_t>(n), "max",
                                to_double(x), to_double(c), to_double(r.lhs), to_double(r.rhs),
                                r.holds});
          } else {
            ++rep.skipped;
          }
        }
      }
    }
  }
  return rep;
}

Table KolmogorovSuiteReport::table() const {
  Table t({"support", "family", "n", "form", "x", "c", "lhs", "rhs", "holds"});
  for (const auto& r : rows) {
    t.add_row({r.support, r.family, r.n, r.form, r.x, r.c, r.lhs, r.rhs,
               std::int64_t(r.holds ? 1 : 0)});
  }
  return t;
}

namespace {

struct RosenthalAxes {
  std::vector<GridFamily> families;  // nonpositive upper mean only
  std::array<Rational, 4> xs = {Rational(1, 2), Rational(1), Rational(2), Rational(3)};
  static constexpr std::size_t max_n = 6;
};

RosenthalAxes rosenthal_axes() {
  RosenthalAxes axes;
  for (auto& gf : grid_families()) {
    if (!(upper_mean(gf.fam) > 0)) axes.families.push_back(std::move(gf));
  }
  return axes;
}

void rosenthal_instance(RosenthalSuiteReport& rep, const GridFamily& gf, std::size_t n,
                        const Rational& x) {
  const auto r = rosenthal_ratio<Rational>(RSeq::iid(gf.fam, n), x);
  ++rep.instances;
  RosenthalSuiteRow row{gf.support_id, gf.family_id, static_cast<std::int64_t>(n), to_double(x),
                        to_double(r.tail_capacity), to_double(r.bound), r.ratio};
  if (r.ratio > rep.max_ratio) {
    rep.max_ratio = r.ratio;
    rep.argmax = gf.support_id + " " + gf.family_id + " n=" + std::to_string(n) +
                 " x=" + fmt_double(to_double(x));
  }
  rep.rows.push_back(std::move(row));
}

}  // namespace

RosenthalSuiteReport rosenthal_grid_suite() {
  RosenthalSuiteReport rep;
  const auto axes = rosenthal_axes();
  for (const auto& gf : axes.families) {
    for (std::size_t n = 1; n <= RosenthalAxes::max_n; ++n) {
      for (const auto& x : axes.xs) rosenthal_instance(rep, gf, n, x);
    }
  }
  return rep;
}

RosenthalSuiteReport rosenthal_random_suite(std::uint64_t seed, std::size_t cases) {
  RosenthalSuiteReport rep;
  const auto axes = rosenthal_axes();
  Rng rng(seed);
  for (std::size_t i = 0; i < cases; ++i) {
    const auto& gf =
        axes.families[static_cast<std::size_t>(rng.next_int(0, static_cast<std::int64_t>(axes.families.size()) - 1))];
    const auto n = static_cast<std::size_t>(rng.next_int(1, RosenthalAxes::max_n));
    const auto& x = axes.xs[static_cast<std::size_t>(rng.next_int(0, 3))];
    rosenthal_instance(rep, gf, n, x);
  }
  return rep;
}

Table RosenthalSuiteReport::table() const {
  Table t({"support", "family", "n", "x", "tail_capacity", "bound", "ratio"});
  for (const auto& r : rows) {
    t.add_row({r.support, r.family, r.n, r.x, r.tail_capacity, r.bound, r.ratio});
  }
  return t;
}

}  // namespace subexp::ineq
