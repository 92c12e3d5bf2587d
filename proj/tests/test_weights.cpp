#include "hgs/error.hpp"
#include "hgs/weights.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

using hgs::RadialWeight;
using hgs::quad::Verdict;

namespace {

// v_x for v = (1-s)^a at integer x: prod_{i=1}^x i/(i+a+1) / (a+1).
long double beta_product(int x, long double a) {
  long double v = 1.0L / (a + 1.0L);
  for (int i = 1; i <= x; ++i) v *= static_cast<long double>(i) / (i + a + 1.0L);
  return v;
}

double e2_at_one() {
  const double euler_gamma = 0.57721566490153286061;
  double sum = 0.0, fact = 1.0;
  for (int k = 1; k < 30; ++k) {
    fact *= k;
    sum += ((k % 2) ? 1.0 : -1.0) / (k * fact);
  }
  return std::exp(-1.0) - (-euler_gamma + sum);
}

} // namespace

TEST(Weight, StandardTailClosedForm) {
  EXPECT_DOUBLE_EQ(RadialWeight::standard(1).tail(0.5), 0.125);
  EXPECT_DOUBLE_EQ(RadialWeight::standard(0).tail(0.25), 0.75);
  EXPECT_THROW(RadialWeight::standard(1).tail(1.0), hgs::Error);
  EXPECT_THROW(RadialWeight::standard(1).tail(-0.1), hgs::Error);
  EXPECT_THROW(RadialWeight::standard(-1), hgs::Error);
}

TEST(Weight, ExponentialTailAgainstSeriesOracle) {
  const auto w = RadialWeight::exponential(1, 1);
  EXPECT_NEAR(w.tail(0.0), e2_at_one(), 1e-11);
}

TEST(Weight, StandardMoments) {
  EXPECT_NEAR(RadialWeight::standard(1).moment(3), 0.05, 1e-15);
  EXPECT_NEAR(RadialWeight::standard(1).moment(1), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(RadialWeight::standard(0.5).moment(0), 2.0 / 3.0, 1e-15);
  for (double a : {-0.5, 0.0, 0.5, 1.0, 1.5}) {
    const auto w = RadialWeight::standard(a);
    for (int x = 0; x <= 200; ++x) {
      const double oracle = static_cast<double>(beta_product(x, a));
      EXPECT_NEAR(w.moment(x), oracle, 1e-10 * oracle) << "a=" << a << " x=" << x;
    }
    EXPECT_NEAR(w.tail(0.0), w.moment(0), 1e-10 * w.moment(0));
  }
}

TEST(Weight, ExtendedMomentsBeyondThousand) {
  const auto w = RadialWeight::standard(1.5).with_precision(hgs::Precision::extended);
  for (int x : {1001, 4096, 20000}) {
    const long double oracle = beta_product(x, 1.5L);
    EXPECT_NEAR(static_cast<double>(w.moment_extended(x) / oracle), 1.0, 1e-8);
    EXPECT_NEAR(w.moment(x) / static_cast<double>(oracle), 1.0, 1e-8);
  }
}

TEST(Weight, MomentsDecreaseAndCacheAgrees) {
  const auto w = RadialWeight::standard(0.25);
  const auto cached = w.with_moment_cache(64);
  for (int x = 1; x <= 64; ++x) {
    EXPECT_LT(w.moment(x), w.moment(x - 1));
    EXPECT_DOUBLE_EQ(cached.moment(x), w.moment(x));
  }
}

TEST(Weight, QuadratureMomentsForTabulatedAndGenericLift) {
  // A dense table of (1-s)^2 reproduces the closed form closely.
  std::vector<double> s, v;
  for (int i = 0; i < 4000; ++i) {
    const double si = 1.0 - std::pow(2.0, -i / 200.0);
    s.push_back(si);
    v.push_back((1 - si) * (1 - si));
  }
  const auto t = RadialWeight::tabulated(s, v);
  const auto exact = RadialWeight::standard(2);
  for (double x : {0.0, 1.0, 7.0, 100.0}) EXPECT_NEAR(t.moment(x) / exact.moment(x), 1.0, 1e-4) << x;
  for (double r : {0.0, 0.5, 0.99}) EXPECT_NEAR(t.tail(r) / exact.tail(r), 1.0, 1e-4) << r;

  const auto lifted_exp = RadialWeight::bergman_lifted(RadialWeight::exponential(1, 1));
  const auto e = RadialWeight::exponential(1, 1);
  // int_0^1 s^0 (1-s) e^{-1/(1-s)} ds = E_3(1)
  const double e3 = 0.5 * (std::exp(-1.0) - e2_at_one());
  EXPECT_NEAR(lifted_exp.moment(0), e3, 1e-10);
  EXPECT_NEAR(lifted_exp.tail(0.0), e3, 1e-10);
  EXPECT_LT(lifted_exp.moment(3), e.moment(3));
}

TEST(Weight, TableFileAndParse) {
  const std::string path = ::testing::TempDir() + "weight_table.txt";
  {
    std::ofstream out(path);
    out << "# s v\n0 1\n0.5 0.5\n0.75 0.25\n0.875 0.125\n";
  }
  const auto w = RadialWeight::parse("table:" + path);
  EXPECT_EQ(w.kind(), RadialWeight::Kind::tabulated);
  EXPECT_NEAR(w.tail(0.0), 0.5, 1e-12);
  EXPECT_EQ(RadialWeight::parse("std:0.5").id(), "std:0.5");
  EXPECT_EQ(RadialWeight::parse("bergman:std:-0.5").id(), "bergman:std:-0.5");
  EXPECT_EQ(RadialWeight::parse("exp:1:2").id(), "exp:1:2");
  EXPECT_THROW(RadialWeight::parse("gauss:1"), hgs::Error);
  EXPECT_THROW(RadialWeight::tabulated({0.5, 0.2}, {1, 1}), hgs::Error);
}

TEST(Weight, BergmanLiftOfStandardTail) {
  for (double a : {-0.5, 0.0, 1.0}) {
    const auto w = RadialWeight::bergman_lifted(RadialWeight::standard(a));
    for (int k = 1; k <= 24; ++k) {
      const double u = std::ldexp(1.0, -k);
      EXPECT_NEAR(w.tail_from_one(u) / (std::pow(u, a + 2) / (a + 2)), 1.0, 1e-12);
    }
  }
}

TEST(Weight, TailStrictlyDecreasing) {
  for (const auto& w : {RadialWeight::standard(-0.5), RadialWeight::exponential(1, 1),
                        RadialWeight::bergman_lifted(RadialWeight::standard(0.5))}) {
    double prev = w.tail(0.0);
    for (int k = 1; k <= 8; ++k) {
      const double t = w.tail(1.0 - std::ldexp(1.0, -k));
      EXPECT_LT(t, prev) << w.id();
      prev = t;
    }
  }
}

TEST(Weight, UnderflowIsReported) {
  const auto w = RadialWeight::exponential(50, 1);
  try {
    (void)w.moment(1e7);
    FAIL() << "expected underflow";
  } catch (const hgs::Error& e) {
    EXPECT_EQ(e.kind(), hgs::ErrorKind::underflow);
  }
}

TEST(Conditions, StandardOne) {
  const auto rep = hgs::condition_report(RadialWeight::standard(1), 20);
  EXPECT_TRUE(rep.doubling.doubling());
  EXPECT_NEAR(rep.doubling.sup_ratio, 4.0, 1e-12);
  EXPECT_NEAR(rep.doubling.beta_estimate, 2.0, 1e-9);
  EXPECT_TRUE(rep.m1.finite());
  EXPECT_TRUE(rep.m2.finite());
  EXPECT_TRUE(rep.m3.finite());
  EXPECT_TRUE(rep.m4.finite());
  EXPECT_NEAR(rep.m1.value, 1.0, 1e-6);
  EXPECT_NEAR(rep.m2.value, 1.0, 1e-6);
  EXPECT_TRUE(rep.vg2.finite());
  EXPECT_NEAR(rep.vg2.value, 2.0, 1e-8);
  // M1 product equals r on the grid.
  for (const auto& p : rep.m1.trail) EXPECT_NEAR(p.partial, p.cutoff, 1e-9);
}

TEST(Conditions, Dichotomy) {
  for (double a : {-0.5, 0.0, 0.5, 1.5, 2.0, 2.5}) {
    const auto rep = hgs::condition_report(RadialWeight::standard(a), 24);
    EXPECT_EQ(rep.m1.verdict, a > 0 ? Verdict::finite : Verdict::infinite) << a;
    EXPECT_EQ(rep.m2.verdict, a < 2 ? Verdict::finite : Verdict::infinite) << a;
    EXPECT_NEAR(rep.doubling.sup_ratio, std::pow(2.0, a + 1), 1e-9);
    if (a > 0) EXPECT_NEAR(rep.m1.value, 1.0 / a, 1e-4 / a) << a;
    if (a < 2) EXPECT_NEAR(rep.m2.value, 1.0 / (2.0 - a), 1e-4) << a;
    if (rep.m2.finite()) EXPECT_TRUE(rep.vg2.finite());
  }
}

TEST(Conditions, ExponentialIsNotDoubling) {
  const auto rep = hgs::condition_report(RadialWeight::exponential(1, 1), 16);
  EXPECT_FALSE(rep.doubling.doubling());
  EXPECT_GT(rep.doubling.trail.at(11).partial, 1e3);
  EXPECT_NE(rep.m1.verdict, Verdict::finite);
  EXPECT_THROW(hgs::condition_report(RadialWeight::standard(1), 9), hgs::Error);
}

TEST(Lemmas, StandardOne) {
  const auto rep = hgs::lemma_checks(RadialWeight::standard(1), 1.0, 10, 128);
  const auto& mt = rep.at("moment-vs-tail");
  for (std::size_t i = 0; i < mt.args.size(); ++i) {
    const double x = mt.args[i];
    EXPECT_NEAR(mt.ratios[i], 2 * x * x / ((x + 1) * (x + 2)), 1e-10);
  }
  EXPECT_GE(mt.min, 0.3);
  EXPECT_LE(mt.max, 2.5);

  // Direct summation oracle to n = 60.
  const auto& ts = rep.at("tail-sum");
  for (int k = 1; k <= 10; ++k) {
    auto term = [](int n) {
      const double x = std::ldexp(1.0, n + 1);
      return std::ldexp(1.0, -3 * n) * (x + 1) * (x + 2);
    };
    double sum = 0.0;
    for (int n = k; n <= 60; ++n) sum += term(n);
    EXPECT_NEAR(ts.ratios[static_cast<std::size_t>(k - 1)], sum / term(k), 1e-9);
    EXPECT_LE(ts.ratios[static_cast<std::size_t>(k - 1)], 4.0);
  }

  const auto& star = rep.at("star-vs-tail");
  EXPECT_NEAR(star.args[1], 0.75, 0.0);
  EXPECT_GE(star.ratios[1], 0.3);
  EXPECT_LE(star.ratios[1], 3.0);

  for (double a : {0.25, 1.0, 1.75}) {
    const auto r = hgs::lemma_checks(RadialWeight::standard(a), 1.0, 8, 4096);
    EXPECT_LE(r.at("moment-doubling").max, std::pow(2.0, a + 1) + 1e-9);
  }
}

TEST(Lemmas, StarFunctionByQuadrature) {
  // w = 1: w*(r) = int_r^1 s log(s/r) ds = -log(r)/2 - (1 - r^2)/4
  const auto w = RadialWeight::standard(0);
  for (double r : {0.5, 0.75, 0.99}) {
    const double exact = -std::log(r) / 2 - (1 - r * r) / 4;
    EXPECT_NEAR(hgs::star_function(w, r), exact, 1e-12);
  }
}

TEST(Lemmas, RefuseNonDoubling) {
  try {
    (void)hgs::lemma_checks(RadialWeight::exponential(1, 1), 1.0, 8, 64);
    FAIL();
  } catch (const hgs::Error& e) {
    EXPECT_EQ(e.kind(), hgs::ErrorKind::hypothesis);
  }
}

TEST(Weight, LogMomentAtHugeOrders) {
  // log v_x -> lgamma(a+1) - (a+1) log x + O(1/x).
  for (double a : {0.5, 1.5}) {
    const auto w = RadialWeight::standard(a);
    for (int e : {30, 45, 62}) {
      const double x = std::ldexp(1.0, e);
      const double oracle = std::lgamma(a + 1) - (a + 1) * e * std::log(2.0) - (a + 1) * (a + 2) / (2 * x);
      EXPECT_NEAR(w.log_moment(x), oracle, 1e-12 * std::abs(oracle)) << a << " " << e;
    }
  }
}
