#include "hgs/operators.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hgs {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "operators", msg); }

// ||z^j||_{D_v}, j = 0..n-1.
std::vector<double> monomial_norms(const RadialWeight& w, long n) {
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long j = 0; j < n; ++j) {
    const double jj = static_cast<double>(j);
    out[static_cast<std::size_t>(j)] = j == 0 ? 1.0 : std::sqrt(2.0 * jj * jj * w.moment(2.0 * jj - 1.0));
  }
  return out;
}

bool vg2_finite(const RadialWeight& w) {
  quad::DyadicTable t([&w](double u) { return u * u / w.tail_from_one(u); }, 30);
  return t.verdict().finite();
}

std::string theorem_stamp(const RadialWeight& w, const ConditionReport& rep, bool need_m2, bool need_vg2) {
  std::vector<std::string> bad;
  if (!rep.doubling.doubling()) bad.push_back(w.id() + " is not doubling");
  if (!rep.m1.finite()) bad.push_back("M1 is " + std::string(to_string(rep.m1.verdict)));
  if (need_m2 && !rep.m2.finite()) bad.push_back("M2 is " + std::string(to_string(rep.m2.verdict)));
  if (need_vg2 && !rep.vg2.finite()) bad.push_back("vg2 is " + std::string(to_string(rep.vg2.kind)));
  std::string s;
  for (const auto& b : bad) s += (s.empty() ? "" : "; ") + b;
  return s;
}

void check_budget(long rows, long cols) {
  if (rows <= 0 || cols <= 0) fail(ErrorKind::input, "matrix dimensions must be positive");
  if (rows * cols > kMaxMatrixEntries)
    fail(ErrorKind::resource, "a " + std::to_string(rows) + "x" + std::to_string(cols) +
                                  " matrix exceeds the memory budget of " + std::to_string(kMaxMatrixEntries) + " entries");
}

// int_{1-hi}^{1-lo} t^j dt for 0 <= lo < hi <= 1 (u-coordinates of the cell ends).
double cell_moment(double lo, double hi, long j) {
  const double m = static_cast<double>(j + 1);
  const double a = m * std::log1p(-lo);
  const double b = hi >= 1.0 ? -INFINITY : m * std::log1p(-hi);
  return std::exp(a) * -std::expm1(b - a) / m;
}

// Gauss-Legendre nodes of f over (0, umax] on geometric panels toward 0;
// weights carry the values of f.
struct NodeTable {
  std::vector<double> u, w;
};

NodeTable radial_nodes(const std::function<double(double)>& f, double umax, int panels) {
  using GL = boost::math::quadrature::gauss<double, 20>;
  const auto& x = GL::abscissa();
  const auto& wt = GL::weights();
  NodeTable out;
  auto add = [&](double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int sgn : {-1, 1}) {
        if (i == 0 && x[0] == 0.0 && sgn > 0) continue;
        const double u = c + sgn * h * x[i];
        out.u.push_back(u);
        out.w.push_back(h * wt[i] * f(u));
      }
    }
  };
  for (int k = 0; k < panels; ++k) {
    const double hi = std::ldexp(umax, -k), lo = 0.5 * hi, mid = 0.75 * hi;
    add(lo, mid);
    add(mid, hi);
  }
  return out;
}

// m_j = sum_q W_q (1-u_q)^j for j = 0..count-1.
std::vector<double> node_moments(const NodeTable& nodes, long count) {
  std::vector<std::size_t> order(nodes.u.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nodes.u[a] < nodes.u[b]; });
  std::vector<double> t, p, wq;
  for (auto i : order) {
    t.push_back(1.0 - nodes.u[i]);
    wq.push_back(nodes.w[i]);
    p.push_back(1.0);
  }
  std::size_t active = t.size();
  std::vector<double> out(static_cast<std::size_t>(count));
  for (long j = 0; j < count; ++j) {
    double s = 0.0;
    for (std::size_t q = 0; q < active; ++q) {
      s += wq[q] * p[q];
      p[q] *= t[q];
    }
    while (active > 0 && p[active - 1] < 1e-300) --active;
    out[static_cast<std::size_t>(j)] = s;
  }
  return out;
}

} // namespace

double moment_of(const CoefficientFunction& f, int j) {
  if (j < 0) fail(ErrorKind::input, "moment index must be nonnegative");
  double s = 0.0;
  for (std::size_t k = f.c.size(); k-- > 0;)
    if (f.c[k] != 0.0) s += f.c[k] / static_cast<double>(static_cast<long>(k) + j + 1);
  return s;
}

quad::DivergenceVerdict moment_of(const RadialFunction& f, int j) {
  if (j < 0) fail(ErrorKind::input, "moment index must be nonnegative");
  const double umax = 1.0 - f.support_lo;
  if (!(umax > 0.0)) {
    quad::DivergenceVerdict zero;
    zero.kind = quad::Verdict::finite;
    return zero;
  }
  auto h = [&](double t) {
    const double u = t * umax;
    return std::exp(j * std::log1p(-u)) * f.eval(1.0 - u, u) * umax;
  };
  return quad::DyadicTable(h, 40).verdict();
}

CoefficientFunction hg_apply(const RadialWeight& w, const Symbol& g, const CoefficientFunction& f, int J) {
  if (J < 0) fail(ErrorKind::input, "J must be nonnegative");
  if (!vg2_finite(w))
    fail(ErrorKind::hypothesis, "vg2 condition int_0^1 (1-s)^2/v^(s) ds is infinite for " + w.id() +
                                    "; H_g is not defined on D_v");
  CoefficientFunction out;
  out.c.resize(static_cast<std::size_t>(J) + 1);
  for (int j = 0; j <= J; ++j) out.c[static_cast<std::size_t>(j)] = g.derivative_coeff(j) * moment_of(f, j);
  out.label = "H_g(" + f.label + ")";
  return out;
}

OperatorMatrix hg_matrix(const RadialWeight& w, const Symbol& g, int N, BasisKind basis, HypothesisPolicy policy,
                         const ConditionReport* report) {
  if (N < 2) fail(ErrorKind::input, "N must be at least 2");
  if (basis == BasisKind::sigma) fail(ErrorKind::input, "the sigma family is not a complete input basis");
  ConditionReport local;
  if (report == nullptr) {
    local = condition_report(w, 24);
    report = &local;
  }
  OperatorMatrix m;
  m.stamp = theorem_stamp(w, *report, true, false);
  if (!m.stamp.empty() && policy == HypothesisPolicy::enforce)
    fail(ErrorKind::hypothesis, "H_g matrix refused: " + m.stamp);

  int cols = N;
  if (basis == BasisKind::block) {
    cols = 0;
    while ((2L << cols) - 1 <= N) ++cols;
  }
  check_budget(2L * N, cols);

  const std::vector<double> norms = monomial_norms(w, 2L * N);
  std::vector<double> d(static_cast<std::size_t>(2 * N));
  for (long j = 0; j < 2L * N; ++j) d[static_cast<std::size_t>(j)] = g.derivative_coeff(j);

  // Input coefficients of each column: (k, a_k) pairs.
  std::vector<std::vector<std::pair<long, double>>> inputs(static_cast<std::size_t>(cols));
  for (int n = 0; n < cols; ++n) {
    if (basis == BasisKind::monomial) {
      inputs[static_cast<std::size_t>(n)].emplace_back(n, 1.0 / norms[static_cast<std::size_t>(n)]);
    } else {
      const auto e = basis_element(w, BasisKind::block, n);
      for (std::size_t k = 0; k < e.c.size(); ++k)
        if (e.c[k] != 0.0) inputs[static_cast<std::size_t>(n)].emplace_back(static_cast<long>(k), e.c[k]);
    }
  }

  auto entry = [&](long j, int n) {
    double mu = 0.0;
    for (const auto& [k, a] : inputs[static_cast<std::size_t>(n)]) mu += a / static_cast<double>(k + j + 1);
    return d[static_cast<std::size_t>(j)] * mu * norms[static_cast<std::size_t>(j)];
  };

  m.entries.resize(N, cols);
  double band_a = 0.0, band_b = 0.0;
  for (int n = 0; n < cols; ++n) {
    for (long j = 0; j < N; ++j) {
      const double e = entry(j, n);
      m.entries(j, n) = e;
      if (j >= N / 2) band_a += e * e;
    }
    for (long j = N; j < 2L * N; ++j) {
      const double e = entry(j, n);
      band_b += e * e;
    }
  }
  if (!m.entries.allFinite()) fail(ErrorKind::accuracy, "non-finite matrix entry for " + w.id() + ", " + g.id());
  m.frobenius_sq = m.entries.squaredNorm();
  double tail = band_b;
  if (band_b > 0.0) {
    const double rho = band_a > 0.0 ? band_b / band_a : INFINITY;
    tail = rho < 1.0 ? band_b / (1.0 - rho) : INFINITY;
  }
  m.row_tail_mass = tail == 0.0 ? 0.0 : tail / (m.frobenius_sq + tail);
  m.weight_id = w.id();
  m.symbol_id = g.id();
  m.basis = basis == BasisKind::monomial ? "monomial" : "block";
  m.N = N;
  return m;
}

double hs_column_series(const RadialWeight& w, const Symbol& g, int n, long J) {
  if (n < 0) fail(ErrorKind::input, "column index must be nonnegative");
  const double nn = n;
  const double norm_sq = n == 0 ? 1.0 : 2.0 * nn * nn * w.moment(2.0 * nn - 1.0);
  const double g1 = g.coeff(1);
  double head = g1 * g1 / ((nn + 1.0) * (nn + 1.0));
  auto term = [&](std::int64_t k) {
    const double kk = static_cast<double>(k);
    const double q = nn + kk + 1.0;
    return 2.0 * kk * kk * w.moment(2.0 * kk - 1.0) * g.gtilde(k + 1) / (q * q);
  };
  if (J >= 0) {
    long double s = head;
    for (long k = 1; k < J; ++k) s += term(k);
    return static_cast<double>(s) / norm_sq;
  }
  const auto series = quad::dyadic_series(term, 18);
  if (!series.finite()) return series.infinite() ? INFINITY : NAN;
  return (head + series.value) / norm_sq;
}

OperatorMatrix hilbert_discretized(const RadialWeight& w, int D, int J, HypothesisPolicy policy,
                                   const ConditionReport* report) {
  if (D < 1 || J < 1) fail(ErrorKind::input, "D and J must be positive");
  if (D > 1000) fail(ErrorKind::input, "D too large for double-precision cells");
  ConditionReport local;
  if (report == nullptr) {
    local = condition_report(w, 24);
    report = &local;
  }
  OperatorMatrix m;
  m.stamp = theorem_stamp(w, *report, false, true);
  if (!m.stamp.empty() && policy == HypothesisPolicy::enforce)
    fail(ErrorKind::hypothesis, "Hilbert operator refused: " + m.stamp);
  check_budget(J, D);

  const std::vector<double> norms = monomial_norms(w, J);
  quad::IntegrationSpec spec;
  spec.rel_tol = 1e-12;
  m.entries.resize(J, D);
  for (int i = 0; i < D; ++i) {
    const double hi = std::ldexp(1.0, -i), lo = 0.5 * hi;
    const double cell_sq =
        quad::integrate([&w](double u) { return w.tail_from_one(u) / (u * u); }, lo, hi, spec).value;
    const double inv = 1.0 / std::sqrt(cell_sq);
    for (int j = 0; j < J; ++j)
      m.entries(j, i) = cell_moment(lo, hi, j) * norms[static_cast<std::size_t>(j)] * inv;
  }
  if (!m.entries.allFinite()) fail(ErrorKind::accuracy, "non-finite cell entry for " + w.id());
  m.frobenius_sq = m.entries.squaredNorm();
  m.weight_id = w.id();
  m.symbol_id = "hilbert";
  m.basis = "cells";
  m.N = std::max(D, J);
  return m;
}

Extremal extremal_fN(const RadialWeight& w, int N, double lambda) {
  if (N < 0 || N > 40) fail(ErrorKind::input, "N must lie in [0, 40]");
  if (lambda <= 0.0) lambda = 2.0 * condition_report(w, 20).doubling.beta_estimate + 4.0;
  if (!(lambda > 1.0)) fail(ErrorKind::input, "lambda must exceed 1 for a singular extremal function");
  const double eps = std::ldexp(1.0, -N);  // 1 - a_N
  const double a = 1.0 - eps;
  const double scale = std::pow(eps, 0.5 * lambda) / std::sqrt(w.tail_from_one(eps));
  const double expo = 0.5 * (1.0 - lambda);

  Extremal out;
  out.lambda = lambda;
  out.radial.label = "f" + std::to_string(N);
  out.radial.eval = [=](double, double u) { return scale * std::pow(u + eps - eps * u, expo); };

  // (1 - a z)^expo = sum_k (b)_k / k! a^k z^k with b = -expo.
  const double b = -expo;
  auto& c = out.coefficients.c;
  c.push_back(scale);
  double sum = scale * scale, prev_term = sum;
  const long cap = 1L << 24;
  for (long k = 1;; ++k) {
    if (k >= cap) fail(ErrorKind::resource, "binomial expansion of f" + std::to_string(N) + " needs too many terms");
    const double ck = c.back() * a * (static_cast<double>(k - 1) + b) / static_cast<double>(k);
    c.push_back(ck);
    const double kk = static_cast<double>(k);
    const double term = 2.0 * kk * kk * w.moment(2.0 * kk - 1.0) * ck * ck;
    sum += term;
    const double rho = term / prev_term;
    prev_term = term;
    if (a == 0.0 || (rho < 1.0 && term / (1.0 - rho) < 1e-10 * sum)) break;
  }
  out.coefficients.label = out.radial.label;
  return out;
}

Extremal extremal_phi(const RadialWeight& w, double r) {
  if (!(r > 0.0 && r < 1.0)) fail(ErrorKind::input, "r must lie in (0, 1)");
  Extremal out;
  out.radial.support_lo = r;
  out.radial.label = "phi(" + shortest(r) + ")";
  out.radial.eval = [w](double, double u) { return u * u / w.tail_from_one(u); };
  const NormVerdict nv = l2v2_norm(w, out.radial);
  out.l2v2_norm = nv.finite() ? nv.value : INFINITY;
  return out;
}

PhiProbe phi_probe(const RadialWeight& w, double r) {
  const Extremal phi = extremal_phi(w, r);
  PhiProbe out;
  out.r = r;
  out.phi_norm = phi.l2v2_norm;
  const double umax = 1.0 - r;

  quad::IntegrationSpec spec;
  spec.endpoints.singular_at_1 = true;
  spec.rel_tol = 1e-10;
  const double v4 = quad::integrate(
                        [&w](double s) {
                          const double u = 1.0 - s;
                          return w.tail_from_one(u) / (u * u * u * u);
                        },
                        0.0, r, spec)
                        .value;
  out.lower = 0.5 * std::sqrt(v4) * out.phi_norm * out.phi_norm;
  if (!std::isfinite(out.phi_norm)) {
    out.converged = false;
    out.dv_norm = out.l2_norm = out.l2_head = out.ratio = NAN;
    return out;
  }

  const NodeTable nodes = radial_nodes([&w](double u) { return u * u / w.tail_from_one(u); }, umax, 60);
  constexpr int kBlocks = 17;
  const std::vector<double> m = node_moments(nodes, 2L << kBlocks);
  const auto series = quad::dyadic_series(
      [&](std::int64_t j) {
        const double jj = static_cast<double>(j);
        const double mj = m[static_cast<std::size_t>(j)];
        return 2.0 * jj * jj * w.moment(2.0 * jj - 1.0) * mj * mj;
      },
      kBlocks);
  out.converged = series.finite();
  out.dv_norm = std::sqrt(m[0] * m[0] + (series.finite() ? series.value : series.trail.back().partial));

  auto H = [&nodes](double us) {
    double s = 0.0;
    for (std::size_t q = 0; q < nodes.u.size(); ++q) s += nodes.w[q] / (nodes.u[q] + us - nodes.u[q] * us);
    return s;
  };
  auto integrand = [&](double us) {
    const double h = H(us);
    return w.tail_from_one(us) / (us * us) * h * h;
  };
  const auto full = quad::DyadicTable(integrand, 40).verdict();
  out.l2_norm = full.finite() ? std::sqrt(full.value) : INFINITY;
  quad::IntegrationSpec head_spec;
  head_spec.rel_tol = 1e-10;
  out.l2_head = std::sqrt(quad::integrate(integrand, umax, 1.0, head_spec).value);
  out.ratio = out.dv_norm / out.phi_norm;
  return out;
}

} // namespace hgs
