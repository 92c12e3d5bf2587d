// Acceptance driver: one line per criterion. Without arguments runs criteria
// 1-9 through the verification suites; with --hilbert-matrix runs the plain
// Hilbert matrix cross-check.

#include "hgs/schatten.hpp"
#include "hgs/util.hpp"
#include "hgs/verify.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cstring>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <thread>

using namespace hgs;
using verify::Outcome;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::vector<std::string> suites;
  double budget_seconds;
  std::function<bool(const std::string& suite, const std::string& scenario, const std::string& name)> select;
};

bool contains(const std::string& s, const char* what) { return s.find(what) != std::string::npos; }

int run_suites() {
  const std::vector<Criterion> criteria = {
      {1, "closed-form weight layer", {"weight-lemmas"}, 5,
       [](auto&, auto& sc, auto&) { return sc == "closed-form layer"; }},
      {2, "Muckenhoupt dichotomy over alpha", {"muckenhoupt-dichotomy"}, 30, [](auto&, auto&, auto&) { return true; }},
      {3, "Hilbert-Schmidt identity at N=512", {"hs-identity"}, 60,
       [](auto&, auto& sc, auto& n) { return contains(n, "SVD S_2 vs column series") || contains(sc, "control"); }},
      {4, "Schatten equivalence, stabilization and spread", {"schatten-equivalence"}, 480,
       [](auto&, auto&, auto& n) { return !contains(n, "nondecreasing"); }},
      {5, "log symbol: S_2^2 affine in log2 N, B(2,p) divergent", {"compactness-dichotomy"}, 120,
       [](auto&, auto& sc, auto& n) { return (sc == "std:1 log" && !contains(n, "nondecreasing")) || contains(sc, "control"); }},
      {6, "Hilbert-operator sandwich", {"hilbert-sandwich"}, 120, [](auto&, auto&, auto&) { return true; }},
      {7, "basis orthonormality and column consistency", {"hs-identity"}, 30,
       [](auto&, auto& sc, auto&) { return sc == "bases" || sc == "column consistency"; }},
      {8, "Bergman corollary for omega = std:-0.5", {"bergman-corollary"}, 120,
       [](auto&, auto&, auto& n) { return !contains(n, "nondecreasing"); }},
      {9, "S_p nondecreasing along nested truncations",
       {"schatten-equivalence", "compactness-dichotomy", "bergman-corollary"}, -1,
       [](auto&, auto&, auto& n) { return contains(n, "nondecreasing"); }},
  };

  SpectrumCache cache;
  verify::Config cfg;
  cfg.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  cfg.cache = &cache;
  std::map<std::string, verify::SuiteResult> results;
  for (const auto& id : verify::suite_ids()) {
    if (id == "hardy-littlewood") continue;
    results[id] = verify::run_suite(id, cfg);
    std::cerr << id << " " << shortest(std::round(results[id].seconds * 10) / 10) << " s\n";
  }

  bool all = true;
  for (const auto& c : criteria) {
    int checked = 0;
    std::vector<std::string> failures;
    double seconds = 0.0;
    for (const auto& sid : c.suites) {
      const auto& r = results.at(sid);
      seconds += r.seconds;
      for (const auto& sc : r.scenarios)
        for (const auto& a : sc.assertions) {
          if (!c.select(sid, sc.name, a.name)) continue;
          ++checked;
          if (a.outcome == Outcome::fail || a.outcome == Outcome::indeterminate)
            failures.push_back(sc.name + " | " + a.name + " = " + shortest(a.value) +
                               (a.detail.empty() ? "" : " (" + a.detail + ")"));
        }
    }
    const bool in_budget = c.budget_seconds < 0 || seconds <= c.budget_seconds;
    const bool pass = checked > 0 && failures.empty() && in_budget;
    all = all && pass;
    std::cout << "criterion " << c.id << ": " << (pass ? "PASS" : "FAIL") << "  " << c.title << " [" << checked
              << " assertions, " << shortest(std::round(seconds * 10) / 10) << " s";
    if (c.budget_seconds > 0) std::cout << " of " << shortest(c.budget_seconds) << " s";
    std::cout << "]\n";
    for (const auto& f : failures) std::cout << "    " << f << '\n';
  }
  return all ? 0 : 1;
}

int run_hilbert_matrix() {
  const auto t0 = std::chrono::steady_clock::now();
  double prev = 0.0;
  bool increasing = true;
  double at512 = 0.0;
  std::string trail;
  for (int N : {16, 32, 64, 128, 256, 512}) {
    Eigen::MatrixXd H(N, N);
    for (int j = 0; j < N; ++j)
      for (int n = 0; n < N; ++n) H(j, n) = 1.0 / (j + n + 1);
    const double top = singular_values(H).top();
    increasing = increasing && top > prev;
    prev = top;
    at512 = top;
    trail += (trail.empty() ? "" : " ") + shortest(top);
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_range = at512 > 3.0 && at512 < std::numbers::pi;
  const bool pass = increasing && in_range && seconds < 10;
  std::cout << "criterion 10: " << (pass ? "PASS" : "FAIL")
            << "  plain Hilbert matrix top singular value increasing and in (3, pi) at N=512 [value "
            << shortest(at512) << ", " << shortest(std::round(seconds * 10) / 10) << " s]\n"
            << "    trail N=16..512: " << trail << '\n';
  return pass ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
  if (argc > 1 && std::strcmp(argv[1], "--hilbert-matrix") == 0) return run_hilbert_matrix();
  return run_suites();
}
