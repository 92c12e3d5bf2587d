#include "hgs/spaces.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace hgs {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "spaces", msg); }

// 2 k^2 v_{2k-1}, the squared norm of z^k for k >= 1.
double monomial_norm_sq(const RadialWeight& w, std::int64_t k) {
  if (k == 0) return 1.0;
  const double kk = static_cast<double>(k);
  return 2.0 * kk * kk * w.moment(2.0 * kk - 1.0);
}

} // namespace

std::int64_t CoefficientFunction::degree() const {
  for (std::size_t k = c.size(); k-- > 0;)
    if (c[k] != 0.0) return static_cast<std::int64_t>(k);
  return 0;
}

double CoefficientFunction::operator()(double x) const {
  double y = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) y = y * x + c[k];
  return y;
}

std::complex<double> CoefficientFunction::operator()(std::complex<double> z) const {
  std::complex<double> y = 0.0;
  for (std::size_t k = c.size(); k-- > 0;) y = y * z + c[k];
  return y;
}

CoefficientFunction CoefficientFunction::monomial(int n) {
  CoefficientFunction f;
  f.c.assign(static_cast<std::size_t>(n) + 1, 0.0);
  f.c.back() = 1.0;
  f.label = "z^" + std::to_string(n);
  return f;
}

double dv_inner(const RadialWeight& w, const CoefficientFunction& f, const CoefficientFunction& h) {
  const std::size_t n = std::min(f.c.size(), h.c.size());
  if (n == 0) return 0.0;
  double s = f.c[0] * h.c[0];
  for (std::size_t k = 1; k < n; ++k) {
    if (f.c[k] == 0.0 || h.c[k] == 0.0) continue;
    s += monomial_norm_sq(w, static_cast<std::int64_t>(k)) * (f.c[k] * h.c[k]);
  }
  return s;
}

double dv_norm(const RadialWeight& w, const CoefficientFunction& f) { return std::sqrt(dv_inner(w, f, f)); }

NormVerdict l2v2_norm(const RadialWeight& w, const RadialFunction& phi) {
  const double umax = 1.0 - phi.support_lo;
  if (!(umax > 0.0)) fail(ErrorKind::input, "radial function has empty support");
  // Integrate over u in (0, umax] after rescaling to (0, 1].
  auto h = [&](double t) {
    const double u = t * umax;
    const double f = phi.eval(1.0 - u, u);
    return f * f * w.tail_from_one(u) / (u * u) * umax;
  };
  NormVerdict out;
  out.probe = quad::DyadicTable(h, 40).verdict();
  out.verdict = out.probe.kind;
  if (out.probe.finite())
    out.value = std::sqrt(out.probe.value);
  else
    out.value = out.probe.infinite() ? INFINITY : NAN;
  return out;
}

CoefficientFunction basis_element(const RadialWeight& w, BasisKind kind, int n, const Symbol* g) {
  if (n < 0) fail(ErrorKind::input, "basis index must be nonnegative");
  CoefficientFunction f;
  if (kind == BasisKind::monomial) {
    f = CoefficientFunction::monomial(n);
    f.c.back() = 1.0 / std::sqrt(monomial_norm_sq(w, n));
    f.label = "e" + std::to_string(n);
    return f;
  }
  if (n > 30) fail(ErrorKind::input, "block index too large");
  const std::int64_t lo = (std::int64_t{1} << n) - 1;
  const std::int64_t hi = (std::int64_t{1} << (n + 1)) - 1;  // exclusive
  f.c.assign(static_cast<std::size_t>(hi), 0.0);
  double norm_sq = 0.0;
  for (std::int64_t k = lo; k < hi; ++k) {
    double a = 1.0;
    if (kind == BasisKind::sigma) {
      if (g == nullptr) fail(ErrorKind::input, "sigma basis requires a symbol");
      a = g->derivative_coeff(k);
    }
    f.c[static_cast<std::size_t>(k)] = a;
    norm_sq += a * a * monomial_norm_sq(w, k);
  }
  if (!(norm_sq > 0.0))
    fail(ErrorKind::input, "degenerate block " + std::to_string(n) + ": all coefficients of g' vanish on it");
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (auto& a : f.c) a *= inv;
  f.label = (kind == BasisKind::block ? "block" : "sigma") + std::to_string(n);
  return f;
}

double max_modulus(const CoefficientFunction& f, double s, int samples) {
  const std::int64_t deg = f.degree();
  int k = std::max<int>(samples, static_cast<int>(4 * std::max<std::int64_t>(deg, 1)));
  auto sweep = [&](int count) {
    double best = 0.0;
    for (int i = 0; i < count; ++i) {
      const double t = 2.0 * std::numbers::pi * i / count;
      best = std::max(best, std::abs(f(std::polar(s, t))));
    }
    return best;
  };
  double prev = sweep(k);
  for (int iter = 0; iter < 12; ++iter) {
    k *= 2;
    const double next = sweep(k);
    if (std::abs(next - prev) <= 1e-6 * std::abs(next)) return next;
    prev = next;
  }
  return prev;
}

double fejer_ratio(const RadialWeight& w, const CoefficientFunction& f) {
  quad::IntegrationSpec spec;
  spec.max_panels = 20000;
  const double radial = quad::integrate([&f](double t) { return std::abs(f(t)); }, 0.0, 1.0, spec).value;
  return radial / dv_norm(w, f);
}

double fejer_ratio(const RadialWeight& w, const RadialFunction& radial, const CoefficientFunction& f) {
  quad::IntegrationSpec spec;
  spec.endpoints.singular_at_0 = true;
  spec.max_panels = 20000;
  const double lo = 1.0 - radial.support_lo;
  const double integral =
      quad::integrate([&radial](double u) { return std::abs(radial.from_one(u)); }, 0.0, lo, spec).value;
  return integral / dv_norm(w, f);
}

HardyLittlewood hl_checks(const RadialWeight& w, const CoefficientFunction& f, int circle_samples,
                          const ConditionReport* report) {
  if (circle_samples < 4) fail(ErrorKind::input, "circle_samples must be at least 4");
  ConditionReport local;
  if (report == nullptr) {
    local = condition_report(w, 20);
    report = &local;
  }
  if (!report->vg2.finite())
    fail(ErrorKind::hypothesis, "vg2 condition int_0^1 (1-s)^2/v^(s) ds is not finite for " + w.id() + "; the radial integral is not controlled");
  if (!report->m1.finite())
    fail(ErrorKind::hypothesis, "M1 is not finite for " + w.id() + "; the maximal-function estimate does not apply");

  HardyLittlewood out;
  out.dv_norm = dv_norm(w, f);
  out.fejer_ratio = fejer_ratio(w, f);
  quad::IntegrationSpec spec;
  spec.endpoints.singular_at_0 = true;
  spec.max_panels = 4000;
  spec.rel_tol = 1e-8;
  const double hl = quad::integrate(
                        [&](double u) {
                          const double m = max_modulus(f, 1.0 - u, circle_samples);
                          return m * m * w.tail_from_one(u) / (u * u);
                        },
                        0.0, 1.0, spec)
                        .value;
  out.hl_ratio = hl / (out.dv_norm * out.dv_norm);
  return out;
}

double a2_norm_squared(const RadialWeight& omega, const CoefficientFunction& f) {
  double s = 0.0;
  for (std::size_t k = 0; k < f.c.size(); ++k)
    if (f.c[k] != 0.0) s += f.c[k] * f.c[k] * 2.0 * omega.moment(2.0 * static_cast<double>(k) + 1.0);
  return s;
}

std::vector<CoefficientFunction> polynomial_corpus() {
  std::vector<CoefficientFunction> out;
  for (int k = 0; k < 10; ++k) out.push_back(CoefficientFunction::monomial(k));
  std::mt19937 rng(20240601u);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  for (int i = 0; i < 10; ++i) {
    CoefficientFunction f;
    f.c.resize(static_cast<std::size_t>(i) + 1);
    for (auto& c : f.c) c = coef(rng);
    f.label = "random" + std::to_string(i);
    out.push_back(std::move(f));
  }
  return out;
}

BergmanLift bergman_lift(const RadialWeight& omega, int depth) {
  const ConditionReport base = condition_report(omega, depth);
  if (!base.doubling.doubling())
    fail(ErrorKind::hypothesis, omega.id() + " is not doubling; the Bergman reduction does not apply");
  BergmanLift out{RadialWeight::bergman_lifted(omega), {}, {}};

  const int td = depth + 6;
  auto wh = [&omega](double u) { return omega.tail_from_one(u); };
  quad::DyadicTable first([&](double u) { return wh(u) / (u * u); }, td);
  quad::DyadicTable second([&](double u) { return 1.0 / wh(u); }, td);
  const quad::GridSup gs =
      quad::grid_sup_distance([&](double u) { return first.above(u) * second.below(u); }, depth);
  out.m2cond.trail = gs.trail;
  out.m2cond.verdict = gs.bounded;
  if (gs.bounded == quad::Verdict::finite) {
    out.m2cond.value = std::sqrt(std::max(gs.sup, std::isfinite(gs.limit) ? gs.limit : 0.0));
  } else {
    out.m2cond.value = gs.bounded == quad::Verdict::infinite ? INFINITY : NAN;
    out.m2cond.note = gs.bounded == quad::Verdict::infinite ? "product grows without bound" : "trail is not conclusive";
  }

  for (const auto& f : polynomial_corpus()) {
    const double d = dv_inner(out.v, f, f);
    out.samples.emplace_back(f.label, a2_norm_squared(omega, f) / d);
  }
  return out;
}

} // namespace hgs
