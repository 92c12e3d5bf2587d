#include "hgs/verify.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <sstream>

namespace hgs::verify {

namespace {

constexpr const char* kSchatten = "Schatten classes of H_g match the B(2,p) norm of g";
constexpr const char* kHS = "Hilbert-Schmidt norm of H_g as a column series";
constexpr const char* kDichotomy = "M1 and M2 both finite for (1-r)^alpha exactly when 0 < alpha < 2";
constexpr const char* kSandwich = "M2/M1 <~ ||H|| <~ M1 M2 on L^2_{V^_2} -> D_v";
constexpr const char* kLemmas = "doubling-weight estimates for moments and tails";
constexpr const char* kBounded = "H_g bounded iff g in B(2,inf), compact iff g in b(2,inf)";
constexpr const char* kBergman = "Schatten classes of H_g on A^2_omega via D_v with v = (1-r) omega";
constexpr const char* kFejer = "int_0^1 |f| <= C ||f||_{D_v} when vg2 is finite";
constexpr const char* kHL = "int_0^1 M_inf^2 V^_2 <= C M1^2 ||f||^2_{D_v}";
constexpr const char* kOrtho = "orthonormal bases of D_v";

Assertion make(std::string name, const char* anchor, double value, double bound, bool ok, std::string detail = {}) {
  return {std::move(name), anchor, value, bound, ok ? Outcome::pass : Outcome::fail, std::move(detail)};
}

Assertion control(std::string name, const char* anchor, double value, double bound, bool expected,
                  std::string detail = {}) {
  return {std::move(name), anchor, value, bound, expected ? Outcome::outside_hypotheses : Outcome::fail,
          std::move(detail)};
}

Assertion refused(std::string name, const char* anchor, const Error& e) {
  return {std::move(name), anchor, NAN, NAN, Outcome::fail, e.what()};
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string alpha_name(double a) { return "std:" + shortest(a); }

// v_x for (1-s)^a by the product formula, x a nonnegative integer.
long double beta_product(long x, long double a) {
  long double v = 1.0L / (a + 1.0L);
  for (long i = 1; i <= x; ++i) v *= static_cast<long double>(i) / (static_cast<long double>(i) + a + 1.0L);
  return v;
}

// ---------------------------------------------------------------------------

SuiteResult weight_lemmas(const Config& cfg) {
  SuiteResult out;
  {
    Scenario s{"closed-form layer", {}};
    for (double a : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
      const auto w = RadialWeight::standard(a);
      double moment_err = 0.0, tail_err = 0.0, ext_err = 0.0;
      long double prod = 1.0L / (a + 1.0L);
      for (long x = 0; x <= 200; ++x) {
        if (x > 0) prod *= static_cast<long double>(x) / (static_cast<long double>(x) + a + 1.0L);
        moment_err = std::max(moment_err, rel(w.moment(static_cast<double>(x)), static_cast<double>(prod)));
      }
      for (int k = 0; k <= 40; ++k) {
        const long double u = std::ldexp(1.0L, -k) * 0.9L;
        const long double oracle = std::exp((a + 1.0L) * std::log(u)) / (a + 1.0L);
        tail_err = std::max(tail_err, rel(w.tail_from_one(static_cast<double>(u)), static_cast<double>(oracle)));
      }
      for (long x : {1000L, 5000L, 20000L, 100000L})
        ext_err = std::max(ext_err, rel(static_cast<double>(w.moment_extended(static_cast<double>(x))),
                                        static_cast<double>(beta_product(x, a))));
      s.assertions.push_back(make("moments x<=200 " + alpha_name(a), kLemmas, moment_err, 1e-10, moment_err <= 1e-10));
      s.assertions.push_back(make("tails " + alpha_name(a), kLemmas, tail_err, 1e-10, tail_err <= 1e-10));
      s.assertions.push_back(make("extended moments x>1000 " + alpha_name(a), kLemmas, ext_err, 1e-8, ext_err <= 1e-8));
    }
    out.scenarios.push_back(std::move(s));
  }
  for (double a : cfg.alphas) {
    Scenario s{"lemma ratios " + alpha_name(a), {}};
    try {
      const auto rep = lemma_checks(RadialWeight::standard(a), 1.0, 12, 4096);
      for (const auto& series : rep.series) {
        const double spread = series.max / series.min;
        const bool ok = series.min > 0 && std::isfinite(series.max) && spread <= cfg.lemma_bracket;
        s.assertions.push_back(make(series.name + " bracket", kLemmas, spread, cfg.lemma_bracket, ok,
                                    "min " + shortest(series.min) + ", max " + shortest(series.max)));
      }
    } catch (const Error& e) {
      s.assertions.push_back(refused("lemma ratios", kLemmas, e));
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"non-doubling control exp:1:1", {}};
    bool refusedd = false;
    std::string detail;
    try {
      (void)lemma_checks(RadialWeight::exponential(1, 1), 1.0, 8, 64);
    } catch (const Error& e) {
      refusedd = e.kind() == ErrorKind::hypothesis;
      detail = e.what();
    }
    s.assertions.push_back(control("refused as non-doubling", kLemmas, NAN, NAN, refusedd, detail));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult muckenhoupt(const Config& cfg) {
  SuiteResult out;
  for (double a : cfg.dichotomy_alphas) {
    const auto rep = condition_report(RadialWeight::standard(a), cfg.depth);
    const bool inside = a > 0.0 && a < 2.0;
    Scenario s{alpha_name(a), {}};
    auto add = [&](const char* name, const ConditionValue& c, bool expect_finite) {
      const double value = c.finite() ? c.value : INFINITY;
      const bool ok = c.verdict == (expect_finite ? quad::Verdict::finite : quad::Verdict::infinite);
      s.assertions.push_back(make(std::string(name) + (expect_finite ? " finite" : " infinite"), kDichotomy, value,
                                  NAN, ok, std::string("verdict ") + hgs::to_string(c.verdict)));
    };
    add("M1", rep.m1, a > 0.0);
    add("M2", rep.m2, a < 2.0);
    if (a == 1.0) {
      s.assertions.push_back(make("M1 = 1", kDichotomy, rep.m1.value, 0.01, std::abs(rep.m1.value - 1) <= 0.01));
      s.assertions.push_back(make("M2 = 1", kDichotomy, rep.m2.value, 0.01, std::abs(rep.m2.value - 1) <= 0.01));
    }
    if (!inside) s.name += " (control)";
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult hilbert_sandwich(const Config& cfg) {
  SuiteResult out;
  const std::vector<int> Ds = {4, 8, 16, 32, cfg.hilbert_D};
  for (double a : cfg.alphas) {
    Scenario s{alpha_name(a), {}};
    try {
      const auto w = RadialWeight::standard(a);
      const auto rep = condition_report(w, cfg.depth);
      std::vector<double> tops;
      for (int D : Ds) tops.push_back(singular_values(hilbert_discretized(w, D, cfg.hilbert_D, HypothesisPolicy::enforce, &rep)).top());
      bool mono = true;
      for (std::size_t i = 1; i < tops.size(); ++i) mono = mono && tops[i] >= tops[i - 1] * (1 - 1e-12);
      const double top = tops.back();
      s.assertions.push_back(make("top singular value nondecreasing in D", kSandwich, top, NAN, mono));
      const double change = rel(tops.back(), tops[tops.size() - 2]);
      s.assertions.push_back(make("stable D 32->" + std::to_string(cfg.hilbert_D), kSandwich, change,
                                  cfg.hilbert_stability, change <= cfg.hilbert_stability));
      const double ceiling = cfg.hilbert_ceiling * rep.m1.value * rep.m2.value;
      s.assertions.push_back(make("top <= ceiling * M1 * M2", kSandwich, top, ceiling, top <= ceiling));
      for (double r : cfg.probe_radii) {
        const auto p = phi_probe(w, r);
        const std::string tag = "r=" + shortest(r);
        if (!p.converged) {
          s.assertions.push_back({"probe " + tag, kSandwich, p.ratio, top, Outcome::indeterminate,
                                  "probe series did not converge"});
          continue;
        }
        s.assertions.push_back(make("top >= probe " + tag, kSandwich, p.ratio, top, top >= p.ratio));
        s.assertions.push_back(make("probe lower bound " + tag, kSandwich, p.dv_norm, p.lower, p.dv_norm >= p.lower,
                                    "L2 head " + shortest(p.l2_head)));
      }
    } catch (const Error& e) {
      s.assertions.push_back(refused("discretized operator", kSandwich, e));
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"std:2 (control)", {}};
    const auto w = RadialWeight::standard(2);
    const auto rep = condition_report(w, cfg.depth);
    std::vector<double> tops;
    std::string stamp;
    for (int D : Ds) {
      const auto m = hilbert_discretized(w, D, cfg.hilbert_D, HypothesisPolicy::stamp, &rep);
      stamp = m.stamp;
      tops.push_back(singular_values(m).top());
    }
    std::string trail;
    for (std::size_t i = 0; i < Ds.size(); ++i) trail += (i ? " " : "") + shortest(tops[i]);
    const double change = rel(tops.back(), tops[tops.size() - 2]);
    s.assertions.push_back(control("top singular value keeps growing", kSandwich, change, cfg.hilbert_stability,
                                   change > cfg.hilbert_stability, stamp + "; trail " + trail));
    const auto p = phi_probe(w, 0.9);
    s.assertions.push_back(control("phi_r not in L^2_{V^_2}", kSandwich, p.phi_norm, NAN, std::isinf(p.phi_norm)));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult hs_identity(const Config& cfg) {
  SuiteResult out;
  const std::vector<std::pair<std::string, Symbol>> symbols = {
      {"pow:0.6", Symbol::power(0.6)}, {"pow:0.75", Symbol::power(0.75)}, {"z+z^3", Symbol::polynomial({0, 1, 0, 1})}};
  for (double a : {1.0, 0.5}) {
    const auto w = RadialWeight::standard(a);
    const auto rep = condition_report(w, cfg.depth);
    for (const auto& [label, g] : symbols) {
      Scenario s{alpha_name(a) + " " + label, {}};
      try {
        const int N = cfg.hs_N;
        const auto m = hg_matrix(w, g, N, BasisKind::monomial, HypothesisPolicy::enforce, &rep);
        const double s2 = schatten_norm(singular_values(m, cfg.tol.svd), 2.0);
        long double series = 0.0L;
        for (int n = 0; n < N; ++n) series += hs_column_series(w, g, n, N);
        const double e1 = rel(s2 * s2, static_cast<double>(series));
        s.assertions.push_back(make("SVD S_2 vs column series N=" + std::to_string(N), kHS, e1, 1e-8, e1 <= 1e-8,
                                    "S_2^2 " + shortest(s2 * s2)));
        const double e2 = rel(s2, m.entries.norm());
        s.assertions.push_back(make("SVD S_2 vs entrywise Frobenius", kHS, e2, cfg.tol.frobenius, e2 <= cfg.tol.frobenius));
        double worst = 0.0;
        for (int n = 1; n <= 64; ++n) {
          const double col = m.entries.col(n).squaredNorm();
          worst = std::max(worst, rel(hs_column_series(w, g, n, N), col));
        }
        s.assertions.push_back(make("column series n=1..64", kHS, worst, 1e-8, worst <= 1e-8));
        const double full = hs_column_series(w, g, 1);
        s.assertions.push_back(make("row tail of column 1", kHS, full - m.entries.col(1).squaredNorm(), NAN,
                                    full >= m.entries.col(1).squaredNorm() * (1 - 1e-12),
                                    "row-tail mass estimate " + shortest(m.row_tail_mass)));
      } catch (const Error& e) {
        s.assertions.push_back(refused("matrix assembly", kHS, e));
      }
      out.scenarios.push_back(std::move(s));
    }
  }
  {
    Scenario s{"bases", {}};
    const auto g = Symbol::power(0.75);
    for (double a : cfg.alphas) {
      const auto w = RadialWeight::standard(a);
      for (auto kind : {BasisKind::monomial, BasisKind::block, BasisKind::sigma}) {
        const int nmax = kind == BasisKind::monomial ? 64 : 14;
        std::vector<CoefficientFunction> e;
        for (int n = 0; n <= nmax; ++n) e.push_back(basis_element(w, kind, n, &g));
        double worst = 0.0;
        for (int n = 0; n <= nmax; ++n)
          for (int k = 0; k <= nmax; ++k) worst = std::max(worst, std::abs(dv_inner(w, e[n], e[k]) - (n == k ? 1.0 : 0.0)));
        const char* kname = kind == BasisKind::monomial ? "monomial" : kind == BasisKind::block ? "block" : "sigma";
        s.assertions.push_back(
            make(std::string("Parseval ") + kname + " " + alpha_name(a), kOrtho, worst, 1e-10, worst <= 1e-10));
      }
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"column consistency", {}};
    for (double a : cfg.alphas) {
      const auto w = RadialWeight::standard(a);
      for (const auto& [label, g] : symbols) {
        const int N = 128;
        const auto m = hg_matrix(w, g, N);
        double worst = 0.0;
        for (int n = 0; n <= 32; ++n) {
          const auto h = hg_apply(w, g, basis_element(w, BasisKind::monomial, n), N - 1);
          worst = std::max(worst, rel(dv_norm(w, h), m.entries.col(n).norm()));
        }
        s.assertions.push_back(make("column norms vs coefficient action " + alpha_name(a) + " " + label, kHS, worst,
                                    1e-10, worst <= 1e-10));
      }
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"std:2 (control)", {}};
    bool ok = false;
    std::string detail;
    try {
      (void)hg_matrix(RadialWeight::standard(2), Symbol::power(0.75), 64);
    } catch (const Error& e) {
      ok = e.kind() == ErrorKind::hypothesis;
      detail = e.what();
    }
    s.assertions.push_back(control("assembly refused", kHS, NAN, NAN, ok, detail));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult schatten_equivalence(const Config& cfg) {
  SuiteResult out;
  std::map<std::pair<double, double>, std::vector<double>> families;  // (alpha, p) -> final ratios
  struct Cell {
    double a, b;
    SweepTable table;
    std::string error;
  };
  std::vector<Cell> cells;
  for (double a : cfg.alphas)
    for (double b : cfg.powers) cells.push_back({a, b, {}, {}});
  parallel_for(static_cast<int>(cells.size()), cfg.threads, [&](int i) {
    auto& c = cells[static_cast<std::size_t>(i)];
    try {
      SweepOptions opt;
      opt.cache = cfg.cache;
      opt.tol = cfg.tol;
      c.table = sweep(RadialWeight::standard(c.a), Symbol::power(c.b), cfg.p_list, cfg.N_list, opt);
    } catch (const Error& e) {
      c.error = e.what();
    }
  });
  for (const auto& c : cells) {
    Scenario s{alpha_name(c.a) + " pow:" + shortest(c.b), {}};
    if (!c.error.empty()) {
      s.assertions.push_back({"sweep", kSchatten, NAN, NAN, Outcome::fail, c.error});
      out.scenarios.push_back(std::move(s));
      continue;
    }
    for (double p : cfg.p_list) {
      const auto rows = c.table.group(p);
      const auto& last = rows.back();
      const std::string tag = "p=" + format_p(p);
      s.assertions.push_back(make("ratio stabilizes " + tag, kSchatten, last.rel_change, cfg.tol.stabilization,
                                  last.rel_change < cfg.tol.stabilization,
                                  "ratio " + shortest(last.ratio) + " at N=" + std::to_string(last.N)));
      int bad = 0;
      for (const auto& r : rows) bad += !r.monotone;
      s.assertions.push_back(make("S_p nondecreasing in N " + tag, kSchatten, bad, 0, bad == 0));
      families[{c.a, p}].push_back(last.ratio);
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"family spread", {}};
    for (const auto& [key, ratios] : families) {
      const auto [lo, hi] = std::minmax_element(ratios.begin(), ratios.end());
      const double spread = *hi / *lo;
      s.assertions.push_back(make(alpha_name(key.first) + " p=" + format_p(key.second), kSchatten, spread,
                                  cfg.tol.spread, spread <= cfg.tol.spread));
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"sigma pairing std:1 log", {}};
    const auto w = RadialWeight::standard(1);
    const auto g = Symbol::log();
    const double pairing = sigma_pairing(w, g, 8, 1.0);
    const double s1 = schatten_norm(singular_values(hg_matrix(w, g, 1024)), 1.0);
    s.assertions.push_back(make("sum |<H_g e_n, sigma_n>| <= S_1 (N=1024)", kSchatten, pairing, s1, pairing <= s1));
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"std:2 pow:0.75 (control)", {}};
    const auto t = sweep(RadialWeight::standard(2), Symbol::power(0.75), {2.0}, {64, 128, 256});
    s.assertions.push_back(control("stamped outside hypotheses", kSchatten, t.rows.back().ratio, NAN, !t.stamp.empty(),
                                   t.stamp));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult compactness(const Config& cfg) {
  SuiteResult out;
  {
    Scenario s{"std:1 log", {}};
    SweepOptions opt;
    opt.cache = cfg.cache;
    opt.threads = cfg.threads;
    const auto t = sweep(RadialWeight::standard(1), Symbol::log(), {2.0}, cfg.log_N_list, opt);
    std::vector<double> x, y;
    for (const auto& r : t.rows) {
      x.push_back(std::log2(static_cast<double>(r.N)));
      y.push_back(r.s_p * r.s_p);
    }
    const auto fit = fit_line(x, y);
    s.assertions.push_back(make("S_2^2 affine in log2 N", kBounded, fit.r_squared, 0.99, fit.r_squared > 0.99,
                                "slope " + shortest(fit.slope)));
    s.assertions.push_back(make("S_2 nondecreasing in N", kBounded, t.monotone_violations(), 0, t.monotone_violations() == 0));
    for (double p : {1.0, 2.0, 4.0}) {
      const auto b = bnorm_blocks(Symbol::log(), p, 20);
      s.assertions.push_back(make("B(2," + format_p(p) + ") partial norms diverge", kBounded, b.value, NAN,
                                  b.verdict == quad::Verdict::infinite));
    }
    const auto binf = bnorm_blocks(Symbol::log(), INFINITY, 20);
    s.assertions.push_back(make("B(2,inf) finite (bounded)", kBounded, binf.value, NAN, binf.finite()));
    const auto lo = little_oh_verdict(Symbol::log(), 20);
    s.assertions.push_back(make("not in b(2,inf) (not compact)", kBounded, lo.slope, NAN, !lo.member));
    out.scenarios.push_back(std::move(s));
  }
  for (double b : cfg.powers) {
    Scenario s{"pow:" + shortest(b), {}};
    const auto lo = little_oh_verdict(Symbol::power(b), 20);
    s.assertions.push_back(make("in b(2,inf) (compact)", kBounded, lo.slope, NAN, lo.member));
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"blockw:0.4 (control)", {}};
    const auto b = bnorm_blocks(Symbol::block_weighted(0.4), 2.0, 40);
    s.assertions.push_back(make("B(2,2) diverges below theta = 1/2", kBounded, b.value, NAN,
                                b.verdict == quad::Verdict::infinite));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

SuiteResult bergman(const Config& cfg) {
  SuiteResult out;
  const auto omega = RadialWeight::parse(cfg.bergman_base);
  Scenario s{"omega " + omega.id(), {}};
  try {
    const auto lift = bergman_lift(omega, cfg.depth);
    const auto rep = condition_report(lift.v, cfg.depth);
    s.assertions.push_back(make("lift M1 finite", kBergman, rep.m1.value, NAN, rep.m1.finite()));
    s.assertions.push_back(make("lift M2 finite", kBergman, rep.m2.value, NAN, rep.m2.finite()));
    s.assertions.push_back(make("omega M2 condition finite", kBergman, lift.m2cond.value, NAN, lift.m2cond.finite()));
    double lo = INFINITY, hi = 0.0;
    for (const auto& [label, ratio] : lift.samples) {
      lo = std::min(lo, ratio);
      hi = std::max(hi, ratio);
    }
    s.assertions.push_back(make("A^2_omega / D_v ratios bracket (20 polynomials)", kBergman, hi / lo,
                                cfg.corpus_bracket, hi / lo <= cfg.corpus_bracket,
                                "min " + shortest(lo) + ", max " + shortest(hi)));
    SweepOptions opt;
    opt.cache = cfg.cache;
    opt.threads = cfg.threads;
    opt.report = &rep;
    const auto t = sweep(lift.v, Symbol::power(0.75), {2.0, INFINITY}, cfg.N_list, opt);
    for (double p : std::vector<double>{2.0, INFINITY}) {
      const auto rows = t.group(p);
      s.assertions.push_back(make("ratio stabilizes p=" + format_p(p), kBergman, rows.back().rel_change,
                                  cfg.tol.stabilization, rows.back().rel_change < cfg.tol.stabilization,
                                  "ratio " + shortest(rows.back().ratio)));
      int bad = 0;
      for (const auto& r : rows) bad += !r.monotone;
      s.assertions.push_back(make("S_p nondecreasing in N p=" + format_p(p), kBergman, bad, 0, bad == 0));
    }
  } catch (const Error& e) {
    s.assertions.push_back(refused("Bergman reduction", kBergman, e));
  }
  out.scenarios.push_back(std::move(s));
  {
    Scenario c{"omega std:0.5 (control)", {}};
    const auto lift = bergman_lift(RadialWeight::standard(0.5), cfg.depth);
    c.assertions.push_back(control("omega M2 condition infinite", kBergman, lift.m2cond.value, NAN,
                                   lift.m2cond.verdict == quad::Verdict::infinite));
    out.scenarios.push_back(std::move(c));
  }
  return out;
}

SuiteResult hardy_littlewood(const Config& cfg) {
  SuiteResult out;
  for (double a : cfg.alphas) {
    Scenario s{alpha_name(a), {}};
    const auto w = RadialWeight::standard(a);
    const auto rep = condition_report(w, cfg.depth);
    try {
      double fejer = 0.0, hl = 0.0;
      for (const auto& f : polynomial_corpus()) {
        const auto r = hl_checks(w, f, 32, &rep);
        fejer = std::max(fejer, r.fejer_ratio);
        hl = std::max(hl, r.hl_ratio / (rep.m1.value * rep.m1.value));
      }
      s.assertions.push_back(make("fejer ratio bounded on corpus", kFejer, fejer, 10.0, fejer <= 10.0));
      s.assertions.push_back(make("hl ratio / M1^2 bounded on corpus", kHL, hl, 10.0, hl <= 10.0));
      double fmax = 0.0, fmin = INFINITY;
      for (int N = 1; N <= 10; ++N) {
        const auto f = extremal_fN(w, N);
        const double r = fejer_ratio(w, f.radial, f.coefficients);
        fmax = std::max(fmax, r);
        fmin = std::min(fmin, r);
      }
      s.assertions.push_back(make("fejer ratio bounded along f_N, N=1..10", kFejer, fmax, 10.0, fmax <= 10.0,
                                  "min " + shortest(fmin)));
    } catch (const Error& e) {
      s.assertions.push_back(refused("Hardy-Littlewood checks", kHL, e));
    }
    out.scenarios.push_back(std::move(s));
  }
  {
    Scenario s{"std:3 (control)", {}};
    const auto w = RadialWeight::standard(3);
    bool ok = false;
    std::string detail;
    try {
      (void)hl_checks(w, CoefficientFunction::monomial(1), 16);
    } catch (const Error& e) {
      ok = e.kind() == ErrorKind::hypothesis;
      detail = e.what();
    }
    s.assertions.push_back(control("refused without vg2", kFejer, NAN, NAN, ok, detail));
    const auto f1 = extremal_fN(w, 1), f10 = extremal_fN(w, 10);
    const double growth = fejer_ratio(w, f10.radial, f10.coefficients) / fejer_ratio(w, f1.radial, f1.coefficients);
    s.assertions.push_back(control("fejer ratio grows along f_N", kFejer, growth, 10.0, growth > 10.0));
    out.scenarios.push_back(std::move(s));
  }
  return out;
}

const std::map<std::string, std::function<SuiteResult(const Config&)>>& registry() {
  static const std::map<std::string, std::function<SuiteResult(const Config&)>> m = {
      {"weight-lemmas", weight_lemmas},
      {"muckenhoupt-dichotomy", muckenhoupt},
      {"hilbert-sandwich", hilbert_sandwich},
      {"hs-identity", hs_identity},
      {"schatten-equivalence", schatten_equivalence},
      {"compactness-dichotomy", compactness},
      {"bergman-corollary", bergman},
      {"hardy-littlewood", hardy_littlewood},
  };
  return m;
}

Outcome combine(Outcome acc, Outcome o) {
  if (acc == Outcome::fail || o == Outcome::fail) return Outcome::fail;
  if (acc == Outcome::indeterminate || o == Outcome::indeterminate) return Outcome::indeterminate;
  return Outcome::pass;
}

} // namespace

const char* to_string(Outcome o) noexcept {
  switch (o) {
    case Outcome::pass: return "pass";
    case Outcome::fail: return "fail";
    case Outcome::indeterminate: return "indeterminate";
    case Outcome::outside_hypotheses: return "outside-hypotheses";
  }
  return "indeterminate";
}

Outcome SuiteResult::overall() const {
  Outcome acc = Outcome::pass;
  for (const auto& s : scenarios)
    for (const auto& a : s.assertions) acc = combine(acc, a.outcome);
  return acc;
}

Outcome Report::overall() const {
  Outcome acc = Outcome::pass;
  for (const auto& s : suites) acc = combine(acc, s.overall());
  return acc;
}

const std::vector<std::string>& suite_ids() {
  static const std::vector<std::string> ids = {"weight-lemmas",        "muckenhoupt-dichotomy", "hilbert-sandwich",
                                               "hs-identity",          "schatten-equivalence",  "compactness-dichotomy",
                                               "bergman-corollary",    "hardy-littlewood"};
  return ids;
}

SuiteResult run_suite(const std::string& id, const Config& cfg) {
  const auto& reg = registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw Error(ErrorKind::input, "verify", "unknown suite '" + id + "'");
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult r;
  try {
    r = it->second(cfg);
  } catch (const Error& e) {
    r.scenarios.push_back({"suite", {refused(id, "", e)}});
  }
  r.id = id;
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

Report run(const std::vector<std::string>& ids, const Config& cfg) {
  for (const auto& id : ids)
    if (!registry().count(id)) throw Error(ErrorKind::input, "verify", "unknown suite '" + id + "'");
  Report rep;
  rep.suites.resize(ids.size());
  parallel_for(static_cast<int>(ids.size()), cfg.threads,
               [&](int i) { rep.suites[static_cast<std::size_t>(i)] = run_suite(ids[static_cast<std::size_t>(i)], cfg); });
  return rep;
}

void to_json(nlohmann::json& j, const Report& r) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    if (std::isnan(x)) return nullptr;
    return x > 0 ? "inf" : "-inf";
  };
  j = nlohmann::json::object();
  j["verdict"] = to_string(r.overall());
  auto& suites = j["suites"] = nlohmann::json::array();
  for (const auto& s : r.suites) {
    nlohmann::json js{{"id", s.id}, {"verdict", to_string(s.overall())}, {"seconds", s.seconds}};
    auto& sc = js["scenarios"] = nlohmann::json::array();
    for (const auto& scen : s.scenarios) {
      nlohmann::json jsc{{"name", scen.name}};
      auto& as = jsc["assertions"] = nlohmann::json::array();
      for (const auto& a : scen.assertions)
        as.push_back({{"name", a.name},
                      {"anchor", a.anchor},
                      {"value", num(a.value)},
                      {"bound", num(a.bound)},
                      {"verdict", to_string(a.outcome)},
                      {"detail", a.detail}});
      sc.push_back(std::move(jsc));
    }
    suites.push_back(std::move(js));
  }
}

std::string to_csv(const Report& r) {
  std::ostringstream os;
  os << "suite,scenario,assertion,anchor,value,bound,verdict\n";
  for (const auto& s : r.suites)
    for (const auto& scen : s.scenarios)
      for (const auto& a : scen.assertions)
        os << csv_field(s.id) << ',' << csv_field(scen.name) << ',' << csv_field(a.name) << ',' << csv_field(a.anchor)
           << ',' << precise(a.value) << ',' << precise(a.bound) << ',' << to_string(a.outcome) << '\n';
  return os.str();
}

std::string to_plain(const Report& r) {
  std::ostringstream os;
  for (const auto& s : r.suites) {
    os << s.id << ": " << to_string(s.overall()) << " (" << shortest(std::round(s.seconds * 10) / 10) << " s)\n";
    for (const auto& scen : s.scenarios)
      for (const auto& a : scen.assertions) {
        os << "  " << std::left;
        os.width(20);
        os << to_string(a.outcome) << scen.name << " | " << a.name << " | value " << shortest(a.value);
        if (!std::isnan(a.bound)) os << " bound " << shortest(a.bound);
        if (!a.detail.empty()) os << " | " << a.detail;
        os << '\n';
      }
  }
  os << "overall: " << to_string(r.overall()) << '\n';
  return os.str();
}

} // namespace hgs::verify
