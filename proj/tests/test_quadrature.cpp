#include "hgs/error.hpp"
#include "hgs/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hgs::quad;

namespace {

// E_2(1) = exp(-1) - E_1(1), with E_1(1) = -gamma + sum_{k>=1} (-1)^(k+1) / (k k!).
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

TEST(Integrate, Polynomial) {
  const auto r = integrate([](double s) { return (1 - s) * (1 - s); }, 0.0, 1.0);
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.value, 1.0 / 3.0, 1e-12);
  EXPECT_LE(std::abs(r.value - 1.0 / 3.0), std::max(r.error, 1e-15));
}

TEST(Integrate, BetaIntegrand) {
  const auto r = integrate([](double s) { return s * s * s * (1 - s); }, 0.0, 1.0);
  EXPECT_NEAR(r.value, 0.05, 1e-12);
}

TEST(Integrate, EssentialZeroAtOne) {
  IntegrationSpec spec;
  spec.endpoints.singular_at_1 = true;
  const auto r = integrate([](double s) { return std::exp(-1.0 / (1.0 - s)); }, 0.0, 1.0, spec);
  EXPECT_TRUE(r.converged());
  EXPECT_NEAR(r.value, e2_at_one(), 1e-11);
  EXPECT_NEAR(e2_at_one(), 0.1484955068, 1e-10);
}

TEST(Integrate, IntegrableEndpointSingularities) {
  IntegrationSpec spec;
  spec.endpoints.singular_at_1 = true;
  auto r = integrate([](double s) { return 1.0 / std::sqrt(1.0 - s); }, 0.0, 1.0, spec);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
  EXPECT_LE(std::abs(r.value - 2.0), r.error + 1e-12);

  spec.endpoints = {true, false};
  r = integrate([](double s) { return -std::log(s); }, 0.0, 1.0, spec);
  EXPECT_NEAR(r.value, 1.0, 1e-9);

  spec.endpoints = {true, true};
  r = integrate([](double s) { return std::pow(s, -0.5) * std::pow(1 - s, -0.5); }, 0.0, 1.0, spec);
  EXPECT_NEAR(r.value, M_PI, 1e-8);
}

TEST(Integrate, ClosedFormPairsWithinReportedError) {
  IntegrationSpec spec;
  spec.endpoints.singular_at_1 = true;
  for (double a : {-0.75, -0.5, 0.0, 0.5, 2.0, 5.0}) {
    const auto r = integrate([a](double s) { return std::pow(1.0 - s, a); }, 0.0, 1.0, spec);
    const double exact = 1.0 / (a + 1.0);
    EXPECT_LE(std::abs(r.value - exact), r.error + 1e-14 * exact) << "a=" << a;
    EXPECT_NEAR(r.value, exact, 1e-9 * exact) << "a=" << a;
  }
  for (int p = 1; p < 6; ++p)
    for (int q = 1; q < 6; ++q) {
      const auto r = integrate([p, q](double s) { return std::pow(s, p) * std::pow(1 - s, q); }, 0.0, 1.0);
      const double exact = std::exp(std::lgamma(p + 1) + std::lgamma(q + 1) - std::lgamma(p + q + 2));
      EXPECT_LE(std::abs(r.value - exact), r.error + 1e-16);
    }
}

TEST(Integrate, Linearity) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> f(6), g(6);
    for (auto& c : f) c = coef(rng);
    for (auto& c : g) c = coef(rng);
    auto poly = [](const std::vector<double>& c) {
      return [c](double s) {
        double y = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) y = y * s + *it;
        return y;
      };
    };
    const double a = coef(rng), b = coef(rng);
    const auto pf = poly(f), pg = poly(g);
    const double lhs = integrate([&](double s) { return a * pf(s) + b * pg(s); }, 0.0, 1.0).value;
    const double rhs = a * integrate(pf, 0.0, 1.0).value + b * integrate(pg, 0.0, 1.0).value;
    EXPECT_NEAR(lhs, rhs, 10 * 1e-12);
  }
}

TEST(Integrate, NaNIsInputError) {
  const auto r = integrate([](double s) { return s > 0.5 ? std::nan("") : 1.0; }, 0.0, 1.0);
  EXPECT_EQ(r.status, Status::invalid_input);
}

TEST(Integrate, BadIntervalThrows) {
  EXPECT_THROW(integrate([](double) { return 1.0; }, 1.0, 0.0), hgs::Error);
  IntegrationSpec spec;
  spec.max_panels = 2;
  EXPECT_THROW(integrate([](double) { return 1.0; }, 0.0, 1.0, spec), hgs::Error);
}

TEST(Integrate, PanelBudgetReported) {
  IntegrationSpec spec;
  spec.max_panels = 4;
  spec.rel_tol = 1e-15;
  spec.abs_tol = 1e-300;
  const auto r = integrate([](double s) { return std::sin(200.0 * s); }, 0.0, 1.0, spec);
  EXPECT_EQ(r.status, Status::accuracy_not_reached);
  EXPECT_TRUE(std::isfinite(r.value));
}

TEST(Probe, HarmonicTailIsLogDivergent) {
  const auto v = divergence_probe([](double s) { return 1.0 / (1.0 - s); }, Side::toward_1, 20);
  EXPECT_EQ(v.kind, Verdict::infinite);
  EXPECT_EQ(v.rate.kind, RateKind::log);
  ASSERT_EQ(v.trail.size(), 20u);
  for (std::size_t i = 1; i < v.trail.size(); ++i) EXPECT_GT(v.trail[i].cutoff, v.trail[i - 1].cutoff);
}

TEST(Probe, SquareRootSingularityIsFinite) {
  const auto v = divergence_probe([](double s) { return 1.0 / std::sqrt(1.0 - s); }, Side::toward_1, 20);
  EXPECT_EQ(v.kind, Verdict::finite);
  EXPECT_NEAR(v.value, 2.0, 1e-8 * 2.0);
  IntegrationSpec spec;
  spec.endpoints.singular_at_1 = true;
  const double direct = integrate([](double s) { return 1.0 / std::sqrt(1.0 - s); }, 0.0, 1.0, spec).value;
  EXPECT_NEAR(v.value, direct, 1e-8 * direct);
}

TEST(Probe, InverseSquareIsPowerOne) {
  const auto v = divergence_probe([](double s) { return 1.0 / ((1.0 - s) * (1.0 - s)); }, Side::toward_1, 20);
  EXPECT_EQ(v.kind, Verdict::infinite);
  EXPECT_EQ(v.rate.kind, RateKind::power);
  EXPECT_NEAR(v.rate.exponent, 1.0, 1e-3);
}

TEST(Probe, TowardZero) {
  const auto v = divergence_probe([](double s) { return std::pow(s, -0.5); }, Side::toward_0, 20);
  EXPECT_EQ(v.kind, Verdict::finite);
  EXPECT_NEAR(v.value, 2.0, 1e-8);
}

TEST(Probe, OscillationIsIndeterminate) {
  const auto v = divergence_probe(
      [](double s) { return std::sin(std::log2(1.0 / (1.0 - s)) * M_PI) / (1.0 - s); }, Side::toward_1, 16);
  EXPECT_EQ(v.kind, Verdict::indeterminate);
  EXPECT_FALSE(v.note.empty());
}

TEST(Probe, DepthPrecondition) {
  EXPECT_THROW(divergence_probe([](double) { return 1.0; }, Side::toward_1, 7), hgs::Error);
}

TEST(Increments, Classification) {
  std::vector<double> geometric, zeros{1, 0.5, 0, 0, 0, 0}, flat(12, 1.0), growing;
  for (int k = 0; k < 12; ++k) geometric.push_back(std::ldexp(1.0, -k));
  for (int k = 0; k < 12; ++k) growing.push_back(std::ldexp(1.0, k));
  auto g = classify_increments(geometric);
  EXPECT_EQ(g.verdict, Verdict::finite);
  EXPECT_NEAR(g.tail, std::ldexp(1.0, -11), 1e-15);
  EXPECT_EQ(classify_increments(zeros).verdict, Verdict::finite);
  EXPECT_EQ(classify_increments(zeros).tail, 0.0);
  EXPECT_EQ(classify_increments(flat).rate.kind, RateKind::log);
  EXPECT_NEAR(classify_increments(growing).rate.exponent, 1.0, 1e-12);
}

TEST(DyadicSeries, HarmonicBlocksAndGeometric) {
  const auto h = dyadic_series([](std::int64_t k) { return 1.0 / static_cast<double>(k); }, 14);
  EXPECT_EQ(h.kind, Verdict::infinite);
  EXPECT_EQ(h.rate.kind, RateKind::log);
  const auto z = dyadic_series([](std::int64_t k) { return 1.0 / (static_cast<double>(k) * k); }, 16);
  EXPECT_EQ(z.kind, Verdict::finite);
  EXPECT_NEAR(z.value, M_PI * M_PI / 6.0, 1e-9);
}

TEST(Table, AboveBelowMatchClosedForm) {
  DyadicTable t([](double u) { return std::sqrt(u); }, 24);
  EXPECT_TRUE(t.verdict().finite());
  for (double u : {0.9, 0.5, 0.3, 1e-3, 1e-9}) {
    const double below = 2.0 / 3.0 * std::pow(u, 1.5);
    EXPECT_NEAR(t.below(u), below, 1e-10 * std::max(below, 1e-12)) << u;
    EXPECT_NEAR(t.above(u), 2.0 / 3.0 - below, 1e-12) << u;
  }
  DyadicTable d([](double u) { return 1.0 / u; }, 20);
  EXPECT_TRUE(d.verdict().infinite());
  EXPECT_TRUE(std::isinf(d.below(0.25)));
  EXPECT_NEAR(d.above(1e-8), -std::log(1e-8), 1e-9);
}

TEST(GridSup, MonotoneHumpAndUnbounded) {
  auto a = grid_sup([](double r) { return r; }, 20);
  EXPECT_DOUBLE_EQ(a.sup, 1.0 - std::ldexp(1.0, -20));
  EXPECT_EQ(a.bounded, Verdict::finite);
  EXPECT_NEAR(a.limit, 1.0, 1e-12);

  auto b = grid_sup([](double r) { return r * (1.0 - r); }, 20);
  EXPECT_NEAR(b.sup, 0.25, 1e-12);
  EXPECT_NEAR(b.arg, 0.5, 1e-6);

  auto c = grid_sup([](double r) { return -std::log(1.0 - r); }, 16);
  EXPECT_EQ(c.bounded, Verdict::infinite);

  auto d = grid_sup([](double r) { return std::sin(10 * r); }, 12);
  for (const auto& p : d.trail) EXPECT_GE(d.sup, p.partial);
  EXPECT_NEAR(d.sup, 1.0, 1e-9);
}

TEST(GridSup, NonFiniteValuesMarkDivergence) {
  auto a = grid_sup([](double r) { return r > 0.9 ? INFINITY : r; }, 12);
  EXPECT_EQ(a.bounded, Verdict::infinite);
  EXPECT_THROW(grid_sup([](double r) { return r; }, 4), hgs::Error);
}
