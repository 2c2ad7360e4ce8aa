// Command-line runner: loads a JSON experiment config, executes one suite,
// and writes plot-ready tables plus a manifest with the run summary.

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "subexp/axioms.hpp"
#include "subexp/clt.hpp"
#include "subexp/gpde.hpp"
#include "subexp/inequalities.hpp"
#include "subexp/json_io.hpp"
#include "subexp/series.hpp"
#include "subexp/table.hpp"
#include "subexp/test_functions.hpp"

#ifndef SUBEXP_VERSION
#define SUBEXP_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json parse_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

const json& require_field(const json& obj, const char* name) {
  if (!obj.contains(name)) throw ConfigError(std::string("config: missing field \"") + name + "\"");
  return obj[name];
}

double require_number(const json& obj, const char* name) {
  const json& v = require_field(obj, name);
  if (!v.is_number()) throw ConfigError(std::string("config: field \"") + name + "\" must be a number");
  return v.get<double>();
}

double number_or(const json& obj, const char* name, double fallback) {
  if (!obj.contains(name)) return fallback;
  if (!obj[name].is_number())
    throw ConfigError(std::string("config: field \"") + name + "\" must be a number");
  return obj[name].get<double>();
}

std::size_t count_or(const json& obj, const char* name, std::size_t fallback) {
  if (!obj.contains(name)) return fallback;
  if (!obj[name].is_number_unsigned())
    throw ConfigError(std::string("config: field \"") + name + "\" must be a nonnegative integer");
  return obj[name].get<std::size_t>();
}

std::uint64_t require_seed(const json& obj) {
  if (!obj.contains("seed") || !obj["seed"].is_number_unsigned())
    throw ConfigError("config: this suite is randomized and needs an unsigned \"seed\"");
  return obj["seed"].get<std::uint64_t>();
}

subexp::AmbiguitySet preset_family(const std::string& name) {
  using subexp::AmbiguitySet, subexp::Support, subexp::DiscreteLaw;
  if (name == "coin")
    return AmbiguitySet(Support({-1.0, 1.0}), {DiscreteLaw({0.5, 0.5})});
  if (name == "two_sigma")
    return AmbiguitySet(Support({-1.0, 0.0, 1.0}),
                        {DiscreteLaw({0.125, 0.75, 0.125}), DiscreteLaw({0.5, 0.0, 0.5})});
  if (name == "two_sigma_shifted")
    return AmbiguitySet(Support({-0.9, 0.1, 1.1}),
                        {DiscreteLaw({0.125, 0.75, 0.125}), DiscreteLaw({0.5, 0.0, 0.5})});
  throw ConfigError("config: unknown family preset \"" + name + "\"");
}

/// A family node is a preset name, {"file": path} or an inline
/// {"support": ..., "laws": ...} object. Paths resolve against the config.
subexp::AmbiguitySet parse_family(const json& node, const fs::path& base_dir) {
  if (node.is_string()) return preset_family(node.get<std::string>());
  if (node.is_object() && node.contains("file")) {
    fs::path p = node["file"].get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return subexp::load_family(p);
  }
  if (node.is_object()) return subexp::family_from_json(node.dump());
  throw ConfigError("config: family must be a preset name, a {\"file\": ...} reference, "
                    "or an inline object");
}

subexp::series::SequenceGenerator parse_generator(const json& node, const fs::path& base_dir) {
  using subexp::series::ScaleKind;
  if (!node.is_object()) throw ConfigError("config: \"generator\" must be an object");
  const auto base = parse_family(require_field(node, "base"), base_dir);
  const std::string kind_str = require_field(node, "kind").get<std::string>();
  ScaleKind kind;
  if (kind_str == "geometric") kind = ScaleKind::geometric;
  else if (kind_str == "power") kind = ScaleKind::power;
  else if (kind_str == "constant") kind = ScaleKind::constant;
  else throw ConfigError("config: generator kind must be geometric, power, or constant");
  const double param = require_number(node, "param");
  const auto horizon = count_or(node, "horizon", 64);
  return subexp::series::SequenceGenerator(base, kind, param, horizon);
}

std::vector<subexp::TestFunction> parse_test_functions(const json& cfg) {
  const auto all = subexp::standard_test_functions();
  if (!cfg.contains("phi")) return all;
  std::vector<subexp::TestFunction> out;
  for (const auto& id : cfg["phi"]) {
    bool found = false;
    for (const auto& tf : all) {
      if (tf.id == id.get<std::string>()) {
        out.push_back(tf);
        found = true;
      }
    }
    if (!found) throw ConfigError("config: unknown test function \"" + id.get<std::string>() + "\"");
  }
  return out;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// What one suite hands back to the writer.
struct SuiteResult {
  json summary;
  json violation_detail = json::array();
  std::size_t violations = 0;
  std::vector<std::pair<std::string, subexp::Table>> files;  // stem -> table
};

// ---------------------------------------------------------------------------
// suite handlers
// ---------------------------------------------------------------------------

SuiteResult run_axioms(const json& cfg) {
  const auto seed = require_seed(cfg);
  const auto cases = count_or(cfg, "cases", 1000);
  const auto rep = subexp::run_axiom_suite(seed, cases);

  SuiteResult out;
  out.violations = rep.violations.size();
  out.summary = {{"cases", rep.cases}, {"checks", rep.checks}, {"violations", out.violations}};
  subexp::Table t({"case", "check", "mode", "lhs", "rhs"});
  for (const auto& v : rep.violations) {
    t.add_row({static_cast<std::int64_t>(v.case_index), v.check, v.mode, v.lhs, v.rhs});
    out.violation_detail.push_back(
        {{"case", v.case_index}, {"check", v.check}, {"mode", v.mode}, {"lhs", v.lhs}, {"rhs", v.rhs}});
  }
  out.files.emplace_back("axioms_violations", std::move(t));
  return out;
}

SuiteResult run_levy(const json&) {
  const auto rep = subexp::ineq::levy_exhaustive_suite();
  SuiteResult out;
  out.violations = rep.violations;
  out.summary = {{"instances", rep.instances}, {"violations", rep.violations}};
  for (const auto& r : rep.rows) {
    if (!r.holds)
      out.violation_detail.push_back({{"support", r.support}, {"family", r.family},
                                      {"beta", r.beta}, {"n", r.n}, {"form", r.form},
                                      {"x", r.x}, {"eps", r.eps}, {"lhs", r.lhs}, {"rhs", r.rhs}});
  }
  out.files.emplace_back("levy", rep.table());
  return out;
}

SuiteResult run_kolmogorov(const json&) {
  const auto rep = subexp::ineq::kolmogorov_exhaustive_suite();
  SuiteResult out;
  out.violations = rep.violations;
  out.summary = {{"instances", rep.instances},
                 {"violations", rep.violations},
                 {"skipped", rep.skipped}};
  for (const auto& r : rep.rows) {
    if (!r.holds)
      out.violation_detail.push_back({{"support", r.support}, {"family", r.family}, {"n", r.n},
                                      {"form", r.form}, {"x", r.x}, {"c", r.c},
                                      {"lhs", r.lhs}, {"rhs", r.rhs}});
  }
  out.files.emplace_back("kolmogorov", rep.table());
  return out;
}

SuiteResult run_rosenthal(const json& cfg) {
  const auto seed = require_seed(cfg);
  const auto cases = count_or(cfg, "cases", 500);
  const auto grid = subexp::ineq::rosenthal_grid_suite();
  const auto random = subexp::ineq::rosenthal_random_suite(seed, cases);

  SuiteResult out;
  out.summary = {{"grid_instances", grid.instances},
                 {"random_instances", random.instances},
                 {"max_ratio", std::max(grid.max_ratio, random.max_ratio)},
                 {"max_ratio_grid", grid.max_ratio},
                 {"max_ratio_random", random.max_ratio},
                 {"argmax", grid.argmax},
                 {"violations", 0}};
  out.files.emplace_back("rosenthal_grid", grid.table());
  out.files.emplace_back("rosenthal_random", random.table());
  return out;
}

SuiteResult run_three_series(const json& cfg, const fs::path& base_dir) {
  const auto gen = parse_generator(require_field(cfg, "generator"), base_dir);
  const double c = number_or(cfg, "c", 1.0);
  const auto count = count_or(cfg, "count", std::min<std::size_t>(gen.horizon(), 30));
  const auto rep = subexp::series::three_series_report(gen, c, count);

  SuiteResult out;
  const auto& last = rep.last();
  out.summary = {{"c", rep.c},       {"count", count},          {"s1", last.s1},
                 {"s2_upper", last.s2_upper}, {"s2_lower", last.s2_lower}, {"s3", last.s3},
                 {"violations", 0}};
  out.files.emplace_back("three_series", rep.table());
  return out;
}

SuiteResult run_cauchy(const json& cfg, const fs::path& base_dir) {
  const auto gen = parse_generator(require_field(cfg, "generator"), base_dir);
  const double eps = require_number(cfg, "eps");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  if (cfg.contains("pairs")) {
    for (const auto& p : cfg["pairs"]) {
      if (!p.is_array() || p.size() != 2)
        throw ConfigError("config: \"pairs\" entries must be [m, n] index pairs");
      pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
    }
  } else {
    for (std::size_t m = 8; 2 * m <= gen.horizon(); m *= 2) pairs.emplace_back(m, 2 * m);
  }
  const auto rep = subexp::series::cauchy_capacity_diagnostic(gen, eps, pairs);

  SuiteResult out;
  double max_upper = 0;
  for (const auto& r : rep.rows) max_upper = std::max(max_upper, r.upper);
  out.summary = {{"eps", eps}, {"windows", rep.rows.size()}, {"max_upper", max_upper},
                 {"violations", 0}};
  out.files.emplace_back("cauchy", rep.table());
  return out;
}

SuiteResult run_gpde(const json& cfg) {
  const double lo2 = number_or(cfg, "sigma_lo2", 0.25);
  const double hi2 = number_or(cfg, "sigma_hi2", 1.0);
  const subexp::gpde::GNormalParams params(lo2, hi2);
  const auto grid = subexp::gpde::Grid::reference();
  std::vector<std::string> blocks;
  if (cfg.contains("blocks")) {
    for (const auto& b : cfg["blocks"]) blocks.push_back(b.get<std::string>());
  } else {
    blocks = {"linear_limit", "moments", "copy_check"};
  }
  const bool assert_tolerances = cfg.value("assert_tolerances", false);

  SuiteResult out;
  out.summary = {{"sigma_lo2", lo2}, {"sigma_hi2", hi2}};
  const auto ramp = subexp::standard_test_functions().front().fn;

  for (const auto& block : blocks) {
    if (block == "linear_limit") {
      if (lo2 != 1.0 || hi2 != 1.0)
        throw ConfigError("config: the linear-limit block needs the collapsed unit band "
                          "(sigma_lo2 == sigma_hi2 == 1)");
      const auto sol = subexp::gpde::solve_g_heat(params, grid, ramp);
      subexp::Table t({"x", "value", "reference", "error"});
      double max_err = 0;
      for (std::size_t i = 0; i < sol.grid.nodes(); ++i) {
        const double x = sol.grid.node(i);
        const double ref = subexp::gpde::gaussian_ramp_reference(x);
        const double err = std::abs(sol.final_field()[i] - ref);
        if (std::abs(x) <= 4.0) max_err = std::max(max_err, err);
        t.add_row({x, sol.final_field()[i], ref, err});
      }
      const auto fine = subexp::gpde::solve_g_heat(params, grid.refined(), ramp);
      double max_err_fine = 0;
      for (std::size_t i = 0; i < fine.grid.nodes(); ++i) {
        const double x = fine.grid.node(i);
        if (std::abs(x) > 4.0) continue;
        max_err_fine = std::max(
            max_err_fine, std::abs(fine.final_field()[i] - subexp::gpde::gaussian_ramp_reference(x)));
      }
      out.summary["linear_limit"] = {{"max_error", max_err},
                                     {"max_error_refined", max_err_fine},
                                     {"refinement_factor", max_err / max_err_fine}};
      if (assert_tolerances && max_err > 1e-3) ++out.violations;
      out.files.emplace_back("gpde_linear_limit", std::move(t));
    } else if (block == "moments") {
      const double cap = 6.0 * 6.0 * hi2;
      const double up = subexp::gpde::gnormal_expectation(
          params, [cap](double v) { return std::min(v * v, cap); }, grid);
      const double lo = -subexp::gpde::gnormal_expectation(
          params, [cap](double v) { return -std::min(v * v, cap); }, grid);
      subexp::Table t({"moment", "value", "target", "gap"});
      t.add_row({std::string("upper_second"), up, hi2, std::abs(up - hi2)});
      t.add_row({std::string("lower_second"), lo, lo2, std::abs(lo - lo2)});
      out.summary["moments"] = {{"upper_second", up}, {"lower_second", lo},
                                {"upper_gap", std::abs(up - hi2)},
                                {"lower_gap", std::abs(lo - lo2)}};
      if (assert_tolerances && (std::abs(up - hi2) > 1e-3 || std::abs(lo - lo2) > 1e-3))
        ++out.violations;
      out.files.emplace_back("gpde_moments", std::move(t));
    } else if (block == "copy_check") {
      std::vector<std::pair<double, double>> pairs = {{1, 0}, {1, 1}, {0.6, 0.8}};
      if (cfg.contains("pairs")) {
        pairs.clear();
        for (const auto& p : cfg["pairs"])
          pairs.emplace_back(p[0].get<double>(), p[1].get<double>());
      }
      subexp::Table t({"a", "b", "combined", "direct", "gap"});
      double max_gap = 0;
      for (const auto& [a, b] : pairs) {
        const auto r = subexp::gpde::independent_copy_check(params, ramp, a, b, grid);
        t.add_row({a, b, r.combined, r.direct, r.gap});
        max_gap = std::max(max_gap, r.gap);
      }
      out.summary["copy_check"] = {{"max_gap", max_gap}};
      if (assert_tolerances && max_gap > 2e-3) ++out.violations;
      out.files.emplace_back("gpde_copy_check", std::move(t));
    } else {
      throw ConfigError("config: unknown gpde block \"" + block + "\"");
    }
  }
  out.summary["violations"] = out.violations;
  return out;
}

SuiteResult run_clt(const json& cfg, const fs::path& base_dir) {
  const auto fam = parse_family(require_field(cfg, "family"), base_dir);
  const auto funcs = parse_test_functions(cfg);
  std::vector<std::size_t> schedule = {25, 100, 400};
  if (cfg.contains("n_schedule")) {
    schedule.clear();
    for (const auto& n : cfg["n_schedule"]) schedule.push_back(n.get<std::size_t>());
  }
  const auto grid = subexp::gpde::Grid::reference();
  const auto rep = subexp::clt::clt_convergence_report(fam, funcs, schedule, grid);

  SuiteResult out;
  const double final_gap = rep.max_gap(schedule.back());
  out.summary = {{"sigma_lo2", rep.sigma_lo2},
                 {"sigma_hi2", rep.sigma_hi2},
                 {"final_n", schedule.back()},
                 {"max_gap_final", final_gap}};
  if (cfg.contains("tolerance")) {
    const double tol = require_number(cfg, "tolerance");
    for (const auto& r : rep.rows) {
      if (r.n == static_cast<std::int64_t>(schedule.back()) && r.gap > tol) {
        ++out.violations;
        out.violation_detail.push_back({{"phi", r.phi}, {"n", r.n}, {"gap", r.gap}, {"tolerance", tol}});
      }
    }
  }
  out.summary["violations"] = out.violations;
  out.files.emplace_back("clt", rep.table());

  if (cfg.value("conditions", true)) {
    const auto profile = subexp::clt::MomentProfile::from_family(fam);
    std::vector<double> cs, xs;
    for (double c = 0.5; c <= 1024.0; c *= 2) cs.push_back(c);
    for (double x = 0.5; x <= 64.0; x *= 2) xs.push_back(x);
    const auto cond = subexp::clt::clt_conditions(profile, cs, xs);
    out.summary["conditions"] = {
        {"moment_finite", cond.moment_finite == subexp::clt::Verdict::holds},
        {"tail_vanishes", cond.tail_vanishes == subexp::clt::Verdict::holds},
        {"mean_vanishes", cond.mean_vanishes == subexp::clt::Verdict::holds},
        {"definitive", cond.definitive}};
    out.files.emplace_back("clt_conditions", cond.table());
  }
  return out;
}

// ---------------------------------------------------------------------------
// run command plumbing
// ---------------------------------------------------------------------------

int run_command(const fs::path& config_path, const std::string& out_dir_flag,
                const std::string& format_flag) {
  const json cfg = parse_json_file(config_path);
  if (!cfg.is_object()) throw ConfigError("config: top level must be an object");
  const std::string suite = require_field(cfg, "suite").get<std::string>();

  std::string format = format_flag.empty() ? cfg.value("format", "csv") : format_flag;
  if (format != "csv" && format != "json")
    throw ConfigError("config: format must be \"csv\" or \"json\"");
  fs::path out_dir = out_dir_flag.empty() ? fs::path(cfg.value("output_dir", ".")) : fs::path(out_dir_flag);
  if (out_dir.is_relative() && out_dir_flag.empty() && cfg.contains("output_dir"))
    out_dir = config_path.parent_path() / out_dir;

  const fs::path base_dir = config_path.parent_path();
  SuiteResult result;
  if (suite == "axioms") result = run_axioms(cfg);
  else if (suite == "levy") result = run_levy(cfg);
  else if (suite == "kolmogorov") result = run_kolmogorov(cfg);
  else if (suite == "rosenthal") result = run_rosenthal(cfg);
  else if (suite == "three-series") result = run_three_series(cfg, base_dir);
  else if (suite == "cauchy") result = run_cauchy(cfg, base_dir);
  else if (suite == "gpde") result = run_gpde(cfg);
  else if (suite == "clt") result = run_clt(cfg, base_dir);
  else throw ConfigError("config: unknown suite \"" + suite + "\"");

  fs::create_directories(out_dir);
  json manifest = {{"tool", "subexp"},
                   {"version", SUBEXP_VERSION},
                   {"suite", suite},
                   {"generated_at", utc_timestamp()},
                   {"config", cfg},
                   {"summary", result.summary},
                   {"violations", result.violations},
                   {"violation_detail", result.violation_detail}};
  json file_list = json::array();
  for (const auto& [stem, table] : result.files) {
    const std::string name = stem + (format == "csv" ? ".csv" : ".json");
    std::ofstream f(out_dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (out_dir / name).string());
    f << (format == "csv" ? table.to_csv() : table.to_json());
    file_list.push_back(name);
  }
  manifest["files"] = file_list;
  {
    std::ofstream f(out_dir / "manifest.json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write manifest.json");
    f << manifest.dump(2) << "\n";
  }

  std::cout << "suite " << suite << ": " << result.violations << " violation(s), "
            << result.files.size() << " data file(s) in " << out_dir.string() << "\n";
  return result.violations == 0 ? 0 : 1;
}

int validate_command(const fs::path& family_path) {
  const auto fam = subexp::load_family(family_path);
  std::cout << family_path.string() << ": ok (" << fam.support().size() << " support points, "
            << fam.law_count() << " laws)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical toolkit for sums under adversarial law families"};
  app.require_subcommand(1);

  std::string config_path, family_path, out_dir, format;
  auto* run = app.add_subcommand("run", "Execute the suite described by a config file");
  run->add_option("config", config_path, "experiment config (JSON)")->required();
  run->add_option("--output-dir", out_dir, "directory for data files and manifest");
  run->add_option("--format", format, "data file format")
      ->check(CLI::IsMember({"csv", "json"}));
  auto* validate = app.add_subcommand("validate", "Check a family file");
  validate->add_option("family", family_path, "family description (JSON)")->required();
  app.add_subcommand("version", "Print the tool version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("version")) {
      std::cout << "subexp " << SUBEXP_VERSION << "\n";
      return 0;
    }
    if (app.got_subcommand("validate")) return validate_command(family_path);
    return run_command(config_path, out_dir, format);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
