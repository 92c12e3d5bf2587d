#include "hgs/error.hpp"
#include "hgs/schatten.hpp"
#include "hgs/util.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace hgs;

TEST(Svd, Examples) {
  Eigen::MatrixXd h(2, 2);
  h << 1, 0.5, 0.5, 1.0 / 3.0;
  const auto s = singular_values(h);
  ASSERT_EQ(s.values.size(), 2u);
  EXPECT_NEAR(s.values[0], (4 + std::sqrt(13.0)) / 6, 1e-14);
  EXPECT_NEAR(s.values[1], (4 - std::sqrt(13.0)) / 6, 1e-14);

  const auto id = singular_values(Eigen::MatrixXd::Identity(3, 3));
  for (double v : id.values) EXPECT_NEAR(v, 1.0, 1e-15);

  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = 3;
  d(1, 1) = 4;
  const auto sd = singular_values(d);
  EXPECT_NEAR(sd.values[0], 4, 1e-15);
  EXPECT_NEAR(sd.values[1], 3, 1e-15);
  EXPECT_LE(sd.residual, 1e-14);

  Eigen::MatrixXd bad = d;
  bad(0, 1) = NAN;
  EXPECT_THROW(singular_values(bad), Error);
}

TEST(Svd, SortedNonnegativeSmallResidual) {
  const auto m = hg_matrix(RadialWeight::standard(1), Symbol::power(0.75), 128);
  const auto s = singular_values(m);
  EXPECT_TRUE(std::is_sorted(s.values.rbegin(), s.values.rend()));
  EXPECT_GE(s.values.back(), 0.0);
  EXPECT_LE(s.residual, 1e-8 * s.top());
}

TEST(SchattenNorm, Examples) {
  SingularSpectrum s;
  s.values = {4, 3};
  EXPECT_DOUBLE_EQ(schatten_norm(s, 1), 7);
  EXPECT_DOUBLE_EQ(schatten_norm(s, 2), 5);
  EXPECT_DOUBLE_EQ(schatten_norm(s, INFINITY), 4);
  EXPECT_NEAR(schatten_norm(s, 0.5), std::pow(2 + std::sqrt(3.0), 2), 1e-12);
  EXPECT_THROW(schatten_norm(s, 0), Error);
  EXPECT_THROW(schatten_norm(s, -1), Error);
}

TEST(SchattenNorm, FrobeniusAndSeries) {
  for (double a : {0.5, 1.0}) {
    const auto w = RadialWeight::standard(a);
    for (const auto& g : {Symbol::power(0.6), Symbol::polynomial({0, 1, 0, 1})}) {
      const int N = 256;
      const auto m = hg_matrix(w, g, N);
      const double s2 = schatten_norm(singular_values(m), 2);
      EXPECT_NEAR(s2, m.entries.norm(), 1e-10 * s2);
      long double series = 0;
      for (int n = 0; n < N; ++n) series += hs_column_series(w, g, n, N);
      EXPECT_NEAR(s2 * s2, static_cast<double>(series), 1e-10 * s2 * s2);
    }
  }
}

TEST(SchattenNorm, PermutationInvariance) {
  const auto m = hg_matrix(RadialWeight::standard(1), Symbol::power(0.6), 64).entries;
  std::vector<int> perm(64);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937(3));
  Eigen::MatrixXd p(64, 64);
  for (int i = 0; i < 64; ++i)
    for (int j = 0; j < 64; ++j) p(i, j) = m(perm[i], perm[j]);
  const auto a = singular_values(m), b = singular_values(p);
  for (int i = 0; i < 64; ++i) EXPECT_NEAR(a.values[i], b.values[i], 1e-10 * a.top());
}

TEST(Sweep, LogSymbolHilbertSchmidtGrowsAffinely) {
  const auto w = RadialWeight::standard(1);
  const auto t = sweep(w, Symbol::log(), {2}, {64, 128, 256, 512, 1024});
  std::vector<double> x, y;
  for (const auto& r : t.rows) {
    x.push_back(std::log2(r.N));
    y.push_back(r.s_p * r.s_p);
  }
  const auto fit = fit_line(x, y);
  EXPECT_GT(fit.r_squared, 0.99);
  EXPECT_GT(fit.slope, 0.1);
  EXPECT_EQ(t.monotone_violations(), 0);
}

TEST(Sweep, PowerSymbolStabilizesAndIsMonotone) {
  const auto w = RadialWeight::standard(1);
  SpectrumCache cache;
  SweepOptions opt;
  opt.cache = &cache;
  opt.threads = 2;
  const auto t = sweep(w, Symbol::power(0.75), {1, 2, 4, INFINITY}, {64, 128, 256, 512}, opt);
  EXPECT_EQ(t.rows.size(), 16u);
  EXPECT_EQ(cache.size(), 4u);
  EXPECT_EQ(t.monotone_violations(), 0);
  EXPECT_TRUE(t.stamp.empty());
  for (double p : std::vector<double>{2.0, INFINITY}) EXPECT_LT(t.group(p).back().rel_change, 0.02);
  // Cached rerun is identical.
  const auto again = sweep(w, Symbol::power(0.75), {1, 2, 4, INFINITY}, {64, 128, 256, 512}, opt);
  for (std::size_t i = 0; i < t.rows.size(); ++i) EXPECT_EQ(t.rows[i].s_p, again.rows[i].s_p);
}

TEST(Sweep, LinearSymbolOperatorNorm) {
  const auto w = RadialWeight::standard(1);
  const auto t = sweep(w, Symbol::polynomial({0, 1}), {INFINITY}, {64, 256});
  EXPECT_DOUBLE_EQ(t.rows[0].b_norm, 1.0);
  // Rank one: s_max^2 = 1 + sum_{n<N} (2n+1) / (n (n+1)^2).
  for (const auto& r : t.rows) {
    double s = 1.0;
    for (int n = 1; n < r.N; ++n) s += (2.0 * n + 1) / (n * (n + 1.0) * (n + 1.0));
    EXPECT_NEAR(r.ratio, std::sqrt(s), 1e-12);
  }
  EXPECT_LT(t.rows[1].rel_change, 0.01);
}

TEST(Sweep, OutsideHypothesesIsStamped) {
  const auto t = sweep(RadialWeight::standard(2), Symbol::power(0.75), {2}, {32, 64});
  EXPECT_NE(t.stamp.find("outside theorem hypotheses"), std::string::npos);
  EXPECT_THROW(sweep(RadialWeight::standard(1), Symbol::log(), {2}, {64, 32}), Error);
  EXPECT_THROW(sweep(RadialWeight::standard(1), Symbol::log(), {2}, {48}), Error);
}

TEST(Sweep, Serialization) {
  const auto t = sweep(RadialWeight::standard(1), Symbol::polynomial({0, 1, 1}), {2}, {16, 32});
  const std::string csv = sweep_csv({t});
  EXPECT_EQ(csv.rfind("weight,symbol,N,p,", 0), 0u);
  EXPECT_NE(csv.find("\"poly:0,1,1\""), std::string::npos);
  nlohmann::json j = t;
  EXPECT_EQ(j["rows"].size(), 2u);
}

TEST(Sigma, PairingBelowTraceNorm) {
  const auto w = RadialWeight::standard(1);
  const auto g = Symbol::log();
  const double pairing = sigma_pairing(w, g, 8, 1.0);
  const double s1 = schatten_norm(singular_values(hg_matrix(w, g, 1024)), 1.0);
  EXPECT_GT(pairing, 0.0);
  EXPECT_LE(pairing, s1);
}

TEST(Parallel, RunsEveryIndexAndPropagatesErrors) {
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](int i) { hits[i]++; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 50);
  EXPECT_THROW(parallel_for(5, 3, [](int i) {
                 if (i == 3) throw Error(ErrorKind::input, "test", "boom");
               }),
               Error);
}
