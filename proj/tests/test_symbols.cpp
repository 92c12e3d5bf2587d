#include "hgs/error.hpp"
#include "hgs/symbols.hpp"

#include <gtest/gtest.h>

#include <cmath>

using hgs::Symbol;
using hgs::quad::Verdict;

namespace {

// Direct summation of sum_m c_m^2 r^(2m), c_m the binomial coefficients of (1-z)^-b.
double power_m2_direct(double b, double r) {
  long double c = 1.0L, s = 0.0L, rp = 1.0L;
  for (long m = 0; m < 20000000; ++m) {
    if (m > 0) {
      c *= (m - 1.0L + b) / m;
      rp *= static_cast<long double>(r) * r;
    }
    s += c * c * rp;
    if (rp < 1e-22L) break;
  }
  return static_cast<double>(s);
}

} // namespace

TEST(Symbol, Coefficients) {
  EXPECT_DOUBLE_EQ(Symbol::log().coeff(5), 0.2);
  EXPECT_DOUBLE_EQ(Symbol::log().coeff(0), 0.0);
  EXPECT_DOUBLE_EQ(Symbol::power(0.75).coeff(1), 1.0);
  EXPECT_DOUBLE_EQ(Symbol::power(0.75).coeff(2), 0.75 / 2);
  const auto z2 = Symbol::polynomial({0, 0, 1});
  EXPECT_EQ(z2.coeff(2), 1.0);
  EXPECT_EQ(z2.coeff(1), 0.0);
  EXPECT_EQ(z2.coeff(7), 0.0);
  EXPECT_EQ(z2.degree(), 2);
  for (int k = 1; k < 4096; ++k) EXPECT_DOUBLE_EQ(k * Symbol::log().coeff(k), 1.0);
  EXPECT_DOUBLE_EQ(Symbol::block_weighted(1).coeff(5), 1.0 / (3 * 5));
}

TEST(Symbol, PowerCoefficientsPositiveDecreasingAndContinuousPastPrefix) {
  const auto g = Symbol::power(0.6, 1024);
  double prev = g.derivative_coeff(0);
  for (int m = 1; m < 3000; ++m) {
    const double c = g.derivative_coeff(m);
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, prev);
    prev = c;
  }
  const auto h = Symbol::power(0.6, 4096);
  for (int m : {1023, 1024, 1025, 2999}) EXPECT_NEAR(g.derivative_coeff(m) / h.derivative_coeff(m), 1.0, 1e-13);
}

TEST(Symbol, ParseAndIds) {
  EXPECT_EQ(Symbol::parse("log").id(), "log");
  EXPECT_EQ(Symbol::parse("pow:0.75").id(), "pow:0.75");
  EXPECT_EQ(Symbol::parse("poly:0,1,0,1").id(), "poly:0,1,0,1");
  EXPECT_EQ(Symbol::parse("blockw:0.4").id(), "blockw:0.4");
  EXPECT_THROW(Symbol::parse("pow:1.2"), hgs::Error);
  EXPECT_THROW(Symbol::parse("sin"), hgs::Error);
}

TEST(Blocks, Profiles) {
  const auto log_prof = hgs::block_profile(Symbol::log(), 14);
  for (double b : log_prof.B) EXPECT_DOUBLE_EQ(b, 1.0);
  const auto z = hgs::block_profile(Symbol::polynomial({0, 1}), 5);
  EXPECT_EQ(z.B[0], 1.0);
  for (int n = 1; n <= 5; ++n) EXPECT_EQ(z.B[static_cast<std::size_t>(n)], 0.0);

  // Direct summation oracle against the closed-form coefficient rule.
  const auto g = Symbol::power(0.75);
  double oracle = 0.0;
  for (int k = 256; k < 512; ++k) {
    const long double c = std::exp(std::lgamma(k - 1 + 0.75L) - std::lgamma(0.75L) - std::lgamma(static_cast<long double>(k)));
    oracle += static_cast<double>(c * c);
  }
  oracle /= 256.0;
  EXPECT_NEAR(g.block(8), oracle, 1e-12 * oracle);
  const double asymptotic = std::ldexp(1.0, -4) / std::pow(std::tgamma(0.75), 2);
  EXPECT_NEAR(g.block(8) / asymptotic, 1.0, 0.25);
}

TEST(BNorm, MonomialBothMethods) {
  const auto z = Symbol::polynomial({0, 1});
  EXPECT_DOUBLE_EQ(hgs::bnorm_blocks(z, 2, 10).value, 1.0);
  const auto in = hgs::bnorm_integral(z, 2);
  EXPECT_TRUE(in.finite());
  EXPECT_NEAR(in.value, 1.0, 1e-10);
  EXPECT_NEAR(hgs::bnorm_integral(z, INFINITY).value, 1.0, 1e-9);
}

TEST(BNorm, LogSymbol) {
  const auto b = hgs::bnorm_blocks(Symbol::log(), INFINITY, 14);
  EXPECT_DOUBLE_EQ(b.value, 1.0);
  EXPECT_TRUE(b.finite());
  const auto two = hgs::bnorm_blocks(Symbol::log(), 2, 14);
  EXPECT_EQ(two.verdict, Verdict::infinite);
  for (const auto& t : two.trail) EXPECT_DOUBLE_EQ(t.partial, t.cutoff + 1.0);
  EXPECT_EQ(hgs::bnorm_integral(Symbol::log(), 2).verdict, Verdict::infinite);
  // sup_r (1-r)^(1/2) (1-r^2)^(-1/2) is attained at r = 0.
  EXPECT_NEAR(hgs::bnorm_integral(Symbol::log(), INFINITY).value, 1.0, 1e-9);
  EXPECT_THROW(hgs::bnorm_blocks(Symbol::log(), 0.0, 10), hgs::Error);
  EXPECT_THROW(hgs::bnorm_integral(Symbol::log(), -1.0), hgs::Error);
}

TEST(BNorm, PowerMeansMatchDirectSummation) {
  for (double b : {0.6, 0.75, 0.9})
    for (double r : {0.3, 0.7, 0.9, 0.99}) {
      const double direct = power_m2_direct(b, r);
      EXPECT_NEAR(Symbol::power(b).m2_squared_from_one(1.0 - r), direct, 1e-12 * direct) << b << " " << r;
    }
}

TEST(BNorm, BlockWeightedMeansMatchDirectSummation) {
  const auto g = Symbol::block_weighted(0.7);
  for (double r : {0.5, 0.9, 0.999}) {
    double s = 0.0;
    for (long m = 0; m < 200000; ++m) s += g.derivative_coeff(m) * g.derivative_coeff(m) * std::pow(r, 2.0 * m);
    EXPECT_NEAR(g.m2_squared_from_one(1.0 - r), s, 1e-10 * s);
  }
}

TEST(BNorm, MethodConsistency) {
  const std::vector<Symbol> corpus{Symbol::polynomial({0, 1}), Symbol::polynomial({0, 1, 0, 1}), Symbol::power(0.6),
                                   Symbol::power(0.9)};
  for (const auto& g : corpus)
    for (double p : {1.0, 2.0, 4.0, HUGE_VAL}) {
      const auto in = hgs::bnorm_integral(g, p);
      ASSERT_TRUE(in.finite()) << g.id() << " p=" << p;
      const double r12 = hgs::bnorm_blocks(g, p, 12).extrapolated / in.value;
      const double r24 = hgs::bnorm_blocks(g, p, 24).extrapolated / in.value;
      EXPECT_GE(r12, 1.0 / 8) << g.id() << " p=" << p;
      EXPECT_LE(r12, 8.0) << g.id() << " p=" << p;
      EXPECT_LT(std::abs(r24 / r12 - 1.0), 0.2) << g.id() << " p=" << p;
    }
}

TEST(BNorm, ScalingAndMonotoneTruncation) {
  const auto g = Symbol::power(0.75);
  const auto g3 = g.scaled(-3.0);
  for (double p : {1.0, 2.0, HUGE_VAL}) {
    EXPECT_NEAR(hgs::bnorm_blocks(g3, p, 12).value, 3.0 * hgs::bnorm_blocks(g, p, 12).value, 1e-14 * 3.0 * hgs::bnorm_blocks(g, p, 12).value);
    EXPECT_NEAR(hgs::bnorm_integral(g3, p).value, 3.0 * hgs::bnorm_integral(g, p).value, 1e-13 * hgs::bnorm_integral(g3, p).value);
  }
  double prev = 0.0;
  for (int n = 1; n < 16; ++n) {
    const double v = hgs::bnorm_blocks(g, 1.0, n).value;
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(BNorm, BlockWeightedFinitenessThreshold) {
  // Terms are (n+1)^(-theta p); the series converges iff theta p > 1.
  EXPECT_EQ(hgs::bnorm_blocks(Symbol::block_weighted(1.0), 2, 30).verdict, Verdict::finite);
  EXPECT_EQ(hgs::bnorm_blocks(Symbol::block_weighted(0.4), 2, 30).verdict, Verdict::infinite);
  const auto c = hgs::bnorm_blocks(Symbol::block_weighted(0.6), 4, 30);
  EXPECT_EQ(c.verdict, Verdict::finite);
  double zeta = 0.0;
  for (int n = 1; n < 2000000; ++n) zeta += std::pow(n, -2.4);
  EXPECT_NEAR(std::pow(c.trail.back().partial, 0.25), std::pow(zeta, 0.25), 0.01);
}

TEST(LittleOh, Verdicts) {
  EXPECT_FALSE(hgs::little_oh_verdict(Symbol::log(), 14).member);
  EXPECT_TRUE(hgs::little_oh_verdict(Symbol::power(0.75), 14).member);
  EXPECT_TRUE(hgs::little_oh_verdict(Symbol::polynomial({0, 1, 1}), 12).member);
  EXPECT_THROW(hgs::little_oh_verdict(Symbol::log(), 9), hgs::Error);
}
