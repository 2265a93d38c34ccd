#pragma once

#include "morcam/grid.hpp"
#include "morcam/io.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace morcam {

/// Knobs shared by the registered checks.  The defaults pin the values the
/// verification suite runs with; shrinking them (fewer trials, coarser
/// grids) is for exploration only.
struct SuiteConfig {
  std::vector<std::string> checks;  // registry tags; empty = none

  int res_1d = 64;
  int res_2d = 16;
  int res_maximal = 32;
  int res_fine = 512;   // decay profiles and refinement chains end here
  std::string family = "auto";  // auto | anchored | dyadic

  std::vector<Scalar> p_set{1.0, 2.0};
  std::vector<Scalar> lambda_set{0.0, 0.5};
  std::vector<Scalar> alpha_set{0.25, 0.5};
  std::vector<Scalar> beta_set{0.5, 1.0};

  Scalar tolerance = 1e-10;      // relative slack on exact inequalities
  Scalar identity_tol = 1e-12;   // pointwise identities
  Scalar fit_r2_min = 0.9;
  Scalar tau = 2.718281828459045;  // CZ level; e matches the minimizing-constant run
  int depth = 4;

  int trials = 50;
  int maximal_trials = 20;
  std::uint64_t seed = 1;
  std::string out_dir;
};

struct CheckResult {
  std::string tag;
  bool pass = true;
  std::vector<std::pair<std::string, Scalar>> measured;
  Scalar tolerance = 0.0;
  double runtime_ms = 0.0;  // console diagnostics; excluded from reports by default
  std::string witness;      // first failing input/cube, empty on pass
};

/// Registry keys, one per verified statement family.
const std::vector<std::string>& registered_checks();

CheckResult run_check(const std::string& tag, const SuiteConfig& cfg);

/// Runs the configured checks (all registered ones when cfg.checks is
/// empty is NOT implied -- an empty list runs nothing).  Unknown tags
/// throw before any computation starts.
std::vector<CheckResult> run_suite(const SuiteConfig& cfg);

inline bool all_passed(const std::vector<CheckResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

/// Reports are byte-identical for a fixed config and seed; wall-clock
/// timings are only written when explicitly requested.
void emit_report(const std::vector<CheckResult>& results, std::ostream& out,
                 FileFormat format, bool include_timings = false);

SuiteConfig suite_config_from_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json to_json(const SuiteConfig& cfg);

/// The numbered verification criteria (1..11); the acceptance runner
/// executes each at the pinned defaults.
constexpr int kCriterionCount = 11;
CheckResult run_criterion(int number, const SuiteConfig& cfg);

}  // namespace morcam
