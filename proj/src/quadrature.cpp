#include "hgs/quadrature.hpp"

#include "hgs/error.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace hgs {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::accuracy: return "accuracy";
    case ErrorKind::divergence: return "divergence";
    case ErrorKind::underflow: return "underflow";
    case ErrorKind::resource: return "resource";
    case ErrorKind::nonconvergence: return "nonconvergence";
  }
  return "unknown";
}

} // namespace hgs

namespace hgs::quad {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Kronrod 15-point abscissae and weights; every other abscissa carries the
// embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  int ring = -1;  // geometric ring index near a singular endpoint, -1 otherwise
  bool right_ring = true;

  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel gk15(const Integrand& f, double a, double b, bool& saw_nan) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = fc * kWg[3];
  double resk = fc * kWgk[7];
  double resabs = std::abs(resk);
  std::array<double, 7> fv1{}, fv2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[static_cast<std::size_t>(j)];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[static_cast<std::size_t>(j)] = f1;
    fv2[static_cast<std::size_t>(j)] = f2;
    resk += kWgk[static_cast<std::size_t>(j)] * (f1 + f2);
    resabs += kWgk[static_cast<std::size_t>(j)] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) resg += kWg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  const double reskh = 0.5 * resk;
  double resasc = kWgk[7] * std::abs(fc - reskh);
  for (std::size_t j = 0; j < 7; ++j)
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));

  Panel p;
  p.a = a;
  p.b = b;
  p.value = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  if (resabs > std::numeric_limits<double>::min() / (50.0 * kEps)) err = std::max(50.0 * kEps * resabs, err);
  p.error = err;
  if (!std::isfinite(p.value)) saw_nan = saw_nan || std::isnan(p.value) || std::isinf(p.value);
  return p;
}

// Number of geometric rings that keep a usable relative resolution of the
// distance to the endpoint.
int ring_count(double width, double endpoint) {
  const double floor_width = std::abs(endpoint) * 1e-9;
  int k = 0;
  while (k < 30 && width * std::ldexp(1.0, -(k + 1)) >= floor_width) ++k;
  return std::max(k, 2);
}

double least_squares_slope(std::span<const double> xs, std::span<const double> ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return sxx > 0.0 ? sxy / sxx : 0.0;
}

} // namespace

void IntegrationSpec::validate() const {
  if (!(abs_tol > 0.0) || !(rel_tol > 0.0))
    throw Error(ErrorKind::input, "quadrature", "tolerances must be strictly positive");
  if (max_panels < 4) throw Error(ErrorKind::input, "quadrature", "max_panels must be at least 4");
}

IntegrationResult integrate(const Integrand& f, double a, double b, const IntegrationSpec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !(a < b))
    throw Error(ErrorKind::input, "quadrature", "integration interval must satisfy a < b");

  const bool sing_a = spec.endpoints.singular_at_0;
  const bool sing_b = spec.endpoints.singular_at_1;
  const double mid = (sing_a && sing_b) ? 0.5 * (a + b) : (sing_b ? a : b);

  bool saw_nan = false;
  std::vector<Panel> initial;
  double sliver_b = 0.0, sliver_a = 0.0;
  int rings_b = 0, rings_a = 0;

  if (!sing_a && !sing_b) {
    initial.push_back(gk15(f, a, b, saw_nan));
  } else {
    if (sing_b) {
      const double w = b - mid;
      rings_b = ring_count(w, b);
      for (int k = 0; k < rings_b; ++k) {
        const double lo = b - w * std::ldexp(1.0, -k);
        const double hi = b - w * std::ldexp(1.0, -(k + 1));
        Panel p = gk15(f, lo, hi, saw_nan);
        p.ring = k;
        p.right_ring = true;
        initial.push_back(p);
      }
    }
    if (sing_a) {
      const double w = mid - a;
      rings_a = ring_count(w, a);
      for (int k = 0; k < rings_a; ++k) {
        const double hi = a + w * std::ldexp(1.0, -k);
        const double lo = a + w * std::ldexp(1.0, -(k + 1));
        Panel p = gk15(f, lo, hi, saw_nan);
        p.ring = k;
        p.right_ring = false;
        initial.push_back(p);
      }
    }
  }

  IntegrationResult out;
  if (saw_nan) {
    out.value = kNaN;
    out.error = kInf;
    out.status = Status::invalid_input;
    out.panels = static_cast<int>(initial.size());
    return out;
  }

  std::priority_queue<Panel> queue(initial.begin(), initial.end());
  std::vector<Panel> frozen;  // panels too narrow to split
  auto totals = [&] {
    double v = 0.0, e = 0.0;
    auto acc = [&](const Panel& p) { v += p.value; e += p.error; };
    std::priority_queue<Panel> copy = queue;
    while (!copy.empty()) { acc(copy.top()); copy.pop(); }
    for (const auto& p : frozen) acc(p);
    return std::pair{v, e};
  };

  // Track totals incrementally to keep the refinement loop linear.
  double value = 0.0, error = 0.0;
  for (const auto& p : initial) { value += p.value; error += p.error; }
  int count = static_cast<int>(initial.size());
  while (!queue.empty() && count < spec.max_panels) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(value));
    if (error <= target) break;
    Panel worst = queue.top();
    queue.pop();
    const double c = 0.5 * (worst.a + worst.b);
    if (!(c > worst.a && c < worst.b) || (worst.b - worst.a) < 64.0 * kEps * std::max(std::abs(c), 1e-300)) {
      frozen.push_back(worst);
      continue;
    }
    Panel left = gk15(f, worst.a, c, saw_nan);
    Panel right = gk15(f, c, worst.b, saw_nan);
    if (saw_nan) {
      out.value = kNaN;
      out.error = kInf;
      out.status = Status::invalid_input;
      out.panels = count;
      return out;
    }
    left.ring = right.ring = worst.ring;
    left.right_ring = right.right_ring = worst.right_ring;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++count;
  }
  // Resum from scratch to drop accumulated cancellation in the running totals.
  std::tie(value, error) = totals();

  // Extrapolate the unresolved slivers next to singular endpoints.
  auto sliver = [&](bool right, int rings, double& tail) -> double {
    if (rings == 0) return 0.0;
    std::vector<double> ring_sum(static_cast<std::size_t>(rings), 0.0);
    std::priority_queue<Panel> copy = queue;
    auto add = [&](const Panel& p) {
      if (p.ring >= 0 && p.right_ring == right) ring_sum[static_cast<std::size_t>(p.ring)] += p.value;
    };
    while (!copy.empty()) { add(copy.top()); copy.pop(); }
    for (const auto& p : frozen) add(p);
    const IncrementFit fit = classify_increments(ring_sum);
    if (fit.verdict == Verdict::finite) {
      tail = fit.tail;
      return fit.tail_error;
    }
    tail = fit.verdict == Verdict::infinite ? kInf : kNaN;
    return kInf;
  };
  const double err_b = sliver(true, rings_b, sliver_b);
  const double err_a = sliver(false, rings_a, sliver_a);

  out.value = value + sliver_a + sliver_b;
  out.error = error + err_a + err_b;
  out.panels = count;
  const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(out.value));
  out.status = (std::isfinite(out.value) && out.error <= target) ? Status::converged : Status::accuracy_not_reached;
  return out;
}

IncrementFit classify_increments(std::span<const double> d) {
  IncrementFit fit;
  const std::size_t n = d.size();
  if (n < 4) {
    fit.note = "fewer than four increments";
    return fit;
  }
  for (double x : d) {
    if (std::isnan(x)) {
      fit.note = "NaN increment";
      return fit;
    }
  }
  for (double x : d) {
    if (std::isinf(x)) {
      fit.verdict = Verdict::infinite;
      fit.rate = {RateKind::faster, kInf};
      fit.slope = kInf;
      return fit;
    }
  }
  const std::size_t w = std::max<std::size_t>(4, n / 2);
  const std::span<const double> window = d.subspan(n - w);

  if (window[w - 1] == 0.0 && window[w - 2] == 0.0) {
    fit.verdict = Verdict::finite;
    fit.slope = -kInf;
    return fit;
  }

  std::vector<double> xs, ys;
  int sign = 0;
  for (std::size_t i = 0; i < w; ++i) {
    const double x = window[i];
    if (x == 0.0) continue;
    const int s = x > 0.0 ? 1 : -1;
    if (sign != 0 && s != sign) {
      fit.note = "increments change sign";
      return fit;
    }
    sign = s;
    xs.push_back(static_cast<double>(n - w + i));
    ys.push_back(std::log2(std::abs(x)));
  }
  if (xs.size() < 3) {
    fit.note = "too few nonzero increments";
    return fit;
  }
  fit.slope = least_squares_slope(xs, ys);

  if (fit.slope > kDivergenceSlope) {
    fit.verdict = Verdict::infinite;
    if (fit.slope <= 0.05) {
      fit.rate = {RateKind::log, 0.0};
    } else {
      const std::size_t h = xs.size() / 2;
      const double early = least_squares_slope(std::span(xs).first(h + 1), std::span(ys).first(h + 1));
      const double late = least_squares_slope(std::span(xs).subspan(h), std::span(ys).subspan(h));
      if (late - early > 0.5 && late > 2.0 * std::max(early, 0.05))
        fit.rate = {RateKind::faster, fit.slope};
      else
        fit.rate = {RateKind::power, fit.slope};
    }
    return fit;
  }

  fit.verdict = Verdict::finite;
  const double fitted = std::exp2(fit.slope);
  auto ratio_at = [&](std::size_t i) {
    const double r = d[i] / d[i - 1];
    return (d[i - 1] != 0.0 && r > 0.0 && r < 1.0) ? r : fitted;
  };
  const double last = d[n - 1];
  const double rho = ratio_at(n - 1);
  const double rho_prev = ratio_at(n - 2);
  fit.tail = last * rho / (1.0 - rho);
  const double alt = last * rho_prev / (1.0 - rho_prev);
  fit.tail_error = std::abs(fit.tail - alt) + 4.0 * kEps * std::abs(fit.tail);
  return fit;
}

// ---------------------------------------------------------------------------

DyadicTable::DyadicTable(Integrand h, int depth, const IntegrationSpec& spec) : h_(std::move(h)), spec_(spec) {
  if (depth < 4) throw Error(ErrorKind::input, "quadrature", "dyadic table depth must be at least 4");
  spec_.endpoints = {};
  spec_.validate();
  const auto n = static_cast<std::size_t>(depth);
  panels_.resize(n);
  double err = 0.0;
  bool bad = false;
  for (std::size_t k = 0; k < n; ++k) {
    const double hi = std::ldexp(1.0, -static_cast<int>(k));
    const double lo = 0.5 * hi;
    const IntegrationResult r = integrate(h_, lo, hi, spec_);
    if (r.status == Status::invalid_input) bad = true;
    panels_[k] = r.value;
    err += r.error;
  }
  upper_.assign(n + 1, 0.0);
  for (std::size_t k = 0; k < n; ++k) upper_[k + 1] = upper_[k] + panels_[k];

  verdict_.trail.reserve(n);
  for (std::size_t k = 0; k < n; ++k)
    verdict_.trail.push_back({std::ldexp(1.0, -static_cast<int>(k + 1)), upper_[k + 1]});

  IncrementFit fit = classify_increments(panels_);
  if (bad) {
    fit.verdict = Verdict::indeterminate;
    fit.note = "integrand produced NaN";
  }
  verdict_.kind = fit.verdict;
  verdict_.slope = fit.slope;
  verdict_.rate = fit.rate;
  verdict_.note = fit.note;
  lower_.assign(n + 1, 0.0);
  if (fit.verdict == Verdict::finite) {
    lower_[n] = fit.tail;
    for (std::size_t k = n; k-- > 0;) lower_[k] = lower_[k + 1] + panels_[k];
    verdict_.value = upper_[n] + fit.tail;
    verdict_.error = err + fit.tail_error;
  } else {
    const double fill = fit.verdict == Verdict::infinite ? kInf : kNaN;
    std::fill(lower_.begin(), lower_.end(), fill);
    verdict_.value = fill;
    verdict_.error = kInf;
  }
}

double DyadicTable::partial(double lo, double hi) const {
  if (!(lo < hi)) return 0.0;
  IntegrationSpec s = spec_;
  s.endpoints.singular_at_0 = lo < 0.25 * hi;
  return integrate(h_, lo, hi, s).value;
}

double DyadicTable::above(double u) const {
  if (!(u > 0.0)) throw Error(ErrorKind::input, "quadrature", "dyadic table queried at u <= 0");
  if (u >= 1.0) return 0.0;
  const int n = depth();
  const int k = static_cast<int>(std::floor(-std::log2(u)));
  if (k < n) {
    const double top = std::ldexp(1.0, -k);
    return upper_[static_cast<std::size_t>(k)] + partial(u, top);
  }
  return upper_[static_cast<std::size_t>(n)] + partial(u, std::ldexp(1.0, -n));
}

double DyadicTable::below(double u) const {
  if (!(u > 0.0)) throw Error(ErrorKind::input, "quadrature", "dyadic table queried at u <= 0");
  if (u >= 1.0) return lower_[0];
  if (verdict_.kind != Verdict::finite) return lower_[0];
  const int n = depth();
  const int k = static_cast<int>(std::floor(-std::log2(u)));
  if (k < n) {
    const double bottom = std::ldexp(1.0, -(k + 1));
    return lower_[static_cast<std::size_t>(k + 1)] + partial(bottom, u);
  }
  // Beyond the table the tail follows the fitted power law u^(-slope).
  return lower_[static_cast<std::size_t>(n)] * std::pow(u * std::ldexp(1.0, n), -verdict_.slope);
}

// ---------------------------------------------------------------------------

DivergenceVerdict divergence_probe(const Integrand& f, Side side, int depth, const IntegrationSpec& panel_spec) {
  if (depth < 8) throw Error(ErrorKind::input, "quadrature", "divergence_probe requires depth >= 8");
  if (side == Side::toward_0) return DyadicTable(f, depth, panel_spec).verdict();
  DyadicTable table([&f](double u) { return f(1.0 - u); }, depth, panel_spec);
  DivergenceVerdict v = table.verdict();
  for (auto& p : v.trail) p.cutoff = 1.0 - p.cutoff;
  return v;
}

DivergenceVerdict dyadic_series(const std::function<double(std::int64_t)>& term, int max_block) {
  if (max_block < 3 || max_block > 40) throw Error(ErrorKind::input, "quadrature", "dyadic_series block count out of range");
  std::vector<double> blocks;
  DivergenceVerdict v;
  double partial = 0.0;
  bool bad = false;
  for (int n = 0; n <= max_block; ++n) {
    const std::int64_t lo = std::int64_t{1} << n;
    const std::int64_t hi = std::int64_t{1} << (n + 1);
    double s = 0.0, c = 0.0;  // Kahan
    for (std::int64_t k = lo; k < hi; ++k) {
      const double y = term(k) - c;
      const double t = s + y;
      c = (t - s) - y;
      s = t;
    }
    if (std::isnan(s)) bad = true;
    blocks.push_back(s);
    partial += s;
    v.trail.push_back({static_cast<double>(hi), partial});
  }
  IncrementFit fit = classify_increments(blocks);
  if (bad) fit.verdict = Verdict::indeterminate;
  v.kind = fit.verdict;
  v.slope = fit.slope;
  v.rate = fit.rate;
  v.note = fit.note;
  if (fit.verdict == Verdict::finite) {
    v.value = partial + fit.tail;
    v.error = fit.tail_error + 1e-15 * std::abs(partial);
  } else {
    v.value = fit.verdict == Verdict::infinite ? kInf : kNaN;
    v.error = kInf;
  }
  return v;
}

// ---------------------------------------------------------------------------

namespace {

GridSup sup_on_distance_grid(const Integrand& h, int depth) {
  if (depth < 8) throw Error(ErrorKind::input, "quadrature", "grid_sup requires depth >= 8");
  GridSup out;
  std::vector<double> vals;
  bool has_nan = false, has_inf = false;
  for (int k = 1; k <= depth; ++k) {
    const double u = std::ldexp(1.0, -k);
    const double y = h(u);
    if (std::isnan(y)) has_nan = true;
    if (std::isinf(y) && y > 0) has_inf = true;
    vals.push_back(y);
    out.trail.push_back({1.0 - u, y});
  }
  if (has_inf) {
    out.sup = kInf;
    out.limit = kInf;
    out.bounded = Verdict::infinite;
    return out;
  }
  if (has_nan) {
    out.bounded = Verdict::indeterminate;
    out.sup = kNaN;
    return out;
  }
  const auto it = std::max_element(vals.begin(), vals.end());
  const auto kmax = static_cast<int>(it - vals.begin()) + 1;
  out.sup = *it;
  out.arg = 1.0 - std::ldexp(1.0, -kmax);

  std::vector<double> inc;
  for (std::size_t i = 1; i < vals.size(); ++i) inc.push_back(vals[i] - vals[i - 1]);
  const IncrementFit fit = classify_increments(inc);
  const bool growing = fit.verdict == Verdict::infinite && inc.back() > 0.0;

  if (kmax < depth) {
    // Interior maximum: refine within the neighbouring grid cells.
    const double u_hi = std::ldexp(1.0, -(kmax - 1));
    const double u_lo = std::ldexp(1.0, -(kmax + 1));
    auto neg = [&h](double u) { return -h(u); };
    const auto [u_best, neg_best] = boost::math::tools::brent_find_minima(neg, u_lo, u_hi, 40);
    if (-neg_best > out.sup) {
      out.sup = -neg_best;
      out.arg = 1.0 - u_best;
    }
    out.bounded = growing ? Verdict::infinite : Verdict::finite;
    out.limit = growing ? kInf : vals.back() + (fit.verdict == Verdict::finite ? fit.tail : 0.0);
    return out;
  }
  if (growing) {
    out.bounded = Verdict::infinite;
    out.limit = kInf;
  } else if (fit.verdict == Verdict::finite) {
    out.bounded = Verdict::finite;
    out.limit = vals.back() + fit.tail;
  } else {
    out.bounded = Verdict::indeterminate;
    out.limit = kNaN;
  }
  return out;
}

} // namespace

GridSup grid_sup(const Integrand& f, int depth) {
  return sup_on_distance_grid([&f](double u) { return f(1.0 - u); }, depth);
}

GridSup grid_sup_distance(const Integrand& h, int depth) { return sup_on_distance_grid(h, depth); }

} // namespace hgs::quad
