#pragma once

// Named verification suites. Each suite runs scenarios (a weight, a symbol,
// an exponent family) and records assertions with the computed value, the
// bound applied and a verdict.

#include "hgs/schatten.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cmath>
#include <string>
#include <vector>

namespace hgs::verify {

enum class Outcome { pass, fail, indeterminate, outside_hypotheses };

const char* to_string(Outcome o) noexcept;

struct Assertion {
  std::string name;
  std::string anchor;  // the statement being checked
  double value = NAN;
  double bound = NAN;
  Outcome outcome = Outcome::indeterminate;
  std::string detail;
};

struct Scenario {
  std::string name;
  std::vector<Assertion> assertions;
};

struct SuiteResult {
  std::string id;
  std::vector<Scenario> scenarios;
  double seconds = 0.0;

  /// fail beats indeterminate beats pass; outside-hypotheses rows are informative.
  Outcome overall() const;
};

struct Report {
  std::vector<SuiteResult> suites;
  Outcome overall() const;
};

struct Config {
  int threads = 1;
  int depth = 24;
  Tolerances tol{};
  std::vector<double> dichotomy_alphas{-0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 2.5};
  std::vector<double> alphas{0.5, 1.0, 1.5};
  std::vector<double> powers{0.6, 0.75, 0.9};
  std::vector<double> p_list{1.0, 2.0, 4.0, INFINITY};
  std::vector<int> N_list{1024, 2048, 4096};
  std::vector<int> log_N_list{64, 128, 256, 512, 1024, 2048, 4096};
  int hs_N = 512;
  int hilbert_D = 64;
  std::vector<double> probe_radii{0.5, 0.9, 0.99, 0.999};
  double lemma_bracket = 16.0;    // max/min of each lemma ratio sequence
  double corpus_bracket = 10.0;   // max/min of the A^2 / D_v ratios
  double hilbert_ceiling = 10.0;  // top singular value <= ceiling * M1 * M2
  double hilbert_stability = 0.05;
  std::string bergman_base = "std:-0.5";
  SpectrumCache* cache = nullptr;
};

const std::vector<std::string>& suite_ids();

/// Throws Error(input) for an unknown id.
SuiteResult run_suite(const std::string& id, const Config& cfg);
/// Runs the suites on up to cfg.threads workers; results keep the order of `ids`.
Report run(const std::vector<std::string>& ids, const Config& cfg);

void to_json(nlohmann::json& j, const Report& r);
/// suite,scenario,assertion,anchor,value,bound,verdict
std::string to_csv(const Report& r);
/// One aligned line per assertion.
std::string to_plain(const Report& r);

} // namespace hgs::verify
