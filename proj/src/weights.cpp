#include "hgs/weights.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace hgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

#ifdef HGS_EXTENDED_PRECISION
constexpr Precision kDefaultPrecision = Precision::extended;
#else
constexpr Precision kDefaultPrecision = Precision::standard;
#endif

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "weights", msg); }

void check_u(double u) {
  if (!(u > 0.0 && u <= 1.0)) fail(ErrorKind::input, "distance to the boundary must lie in (0,1], got " + shortest(u));
}

} // namespace

struct RadialWeight::Impl {
  Kind kind = Kind::standard;
  std::string id;
  Precision precision = kDefaultPrecision;

  // v(1-u) = u^power exactly (standard weights and lifts of them).
  bool power = false;
  double exponent = 0.0;
  double base_alpha = 0.0;

  std::shared_ptr<const RadialWeight> base;
  double c = 0.0, gamma = 0.0;

  std::vector<double> ts, tv, tu, cum;  // table samples, distances 1-s, tails at samples
  double kappa = 0.0;                    // power-law continuation exponent past the last sample

  std::vector<double> moments;  // integer moments 0..size-1

  double density_u(double u) const;
  double tail_u(double u) const;
  double log_tail_u(double u) const;
  double moment(double x) const;
  double quad_moment(double x) const;
};

double RadialWeight::Impl::density_u(double u) const {
  if (power) return std::pow(u, exponent);
  switch (kind) {
    case Kind::bergman_lifted: return u * base->density_from_one(u);
    case Kind::exponential: return std::exp(-c * std::pow(u, -gamma));
    case Kind::tabulated: {
      const std::size_t n = ts.size();
      if (u <= tu[n - 1]) return tv[n - 1] * std::pow(u / tu[n - 1], kappa);
      const double s = 1.0 - u;
      if (s <= ts[0]) return tv[0];
      const auto it = std::upper_bound(ts.begin(), ts.end(), s);
      const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
      const double t = (s - ts[i]) / (ts[i + 1] - ts[i]);
      return tv[i] + t * (tv[i + 1] - tv[i]);
    }
    default: break;
  }
  return kNaN;
}

double RadialWeight::Impl::tail_u(double u) const {
  if (power) return std::pow(u, exponent + 1.0) / (exponent + 1.0);
  switch (kind) {
    case Kind::exponential: return std::exp(log_tail_u(u));
    case Kind::bergman_lifted: {
      quad::IntegrationSpec spec;
      spec.endpoints.singular_at_0 = true;
      spec.rel_tol = 1e-12;
      return quad::integrate([this](double t) { return density_u(t); }, 0.0, u, spec).value;
    }
    case Kind::tabulated: {
      const std::size_t n = ts.size();
      if (u <= tu[n - 1]) return cum[n - 1] * std::pow(u / tu[n - 1], kappa + 1.0);
      const double s = 1.0 - u;
      if (s <= ts[0]) return cum[0] + tv[0] * (ts[0] - s);
      const auto it = std::upper_bound(ts.begin(), ts.end(), s);
      const auto i = static_cast<std::size_t>(it - ts.begin()) - 1;
      return cum[i + 1] + 0.5 * (density_u(u) + tv[i + 1]) * (ts[i + 1] - s);
    }
    default: break;
  }
  return kNaN;
}

double RadialWeight::Impl::log_tail_u(double u) const {
  if (power) return (exponent + 1.0) * std::log(u) - std::log(exponent + 1.0);
  if (kind == Kind::exponential) {
    // int_0^u exp(-c t^-g) dt = exp(-c u^-g) int_0^u exp(c (u^-g - t^-g)) dt
    const double a = c * std::pow(u, -gamma);
    quad::IntegrationSpec spec;
    spec.endpoints.singular_at_0 = true;
    spec.abs_tol = 1e-300;
    spec.rel_tol = 1e-12;
    const double scaled =
        quad::integrate([&](double t) { return std::exp(a - c * std::pow(t, -gamma)); }, 0.0, u, spec).value;
    return -a + std::log(scaled);
  }
  return std::log(tail_u(u));
}

double RadialWeight::Impl::quad_moment(double x) const {
  auto f = [&](double u) {
    const double d = density_u(u);
    return d == 0.0 ? 0.0 : std::exp(x * std::log1p(-u)) * d;
  };
  quad::IntegrationSpec spec;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-13;
  const double split = std::min(1.0, 1.0 / std::max(x, 1.0));
  spec.endpoints.singular_at_0 = true;
  double total = quad::integrate(f, 0.0, split, spec).value;
  spec.endpoints = {};
  for (double lo = split; lo < 1.0; lo *= 2.0) {
    const double hi = std::min(1.0, 2.0 * lo);
    const double part = quad::integrate(f, lo, hi, spec).value;
    total += part;
    if (part < 1e-18 * total) break;
  }
  return total;
}

double RadialWeight::Impl::moment(double x) const {
  if (!(x >= 0.0) || !std::isfinite(x)) fail(ErrorKind::input, "moment order must be a finite x >= 0");
  if (x == std::floor(x) && x < static_cast<double>(moments.size())) return moments[static_cast<std::size_t>(x)];
  double value;
  if (power) {
    if (precision == Precision::extended && x > 1e3) {
      const long double a = exponent;
      const long double lx = x;
      value = static_cast<double>(std::exp(std::lgamma(lx + 1) + std::lgamma(a + 1) - std::lgamma(lx + a + 2)));
    } else {
      value = std::exp(std::lgamma(x + 1.0) + std::lgamma(exponent + 1.0) - std::lgamma(x + exponent + 2.0));
    }
  } else {
    value = quad_moment(x);
  }
  if (!(value >= DBL_MIN))
    fail(ErrorKind::underflow, "v_x underflows in double precision for " + id + " at x=" + shortest(x) +
                                   "; use extended precision or log_moment");
  return value;
}

// ---------------------------------------------------------------------------

RadialWeight RadialWeight::standard(double alpha) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) fail(ErrorKind::input, "standard weight needs alpha > -1");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::standard;
  impl->id = "std:" + shortest(alpha);
  impl->power = true;
  impl->exponent = alpha;
  impl->base_alpha = alpha;
  return RadialWeight(impl);
}

RadialWeight RadialWeight::bergman_lifted(const RadialWeight& base) {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::bergman_lifted;
  impl->id = "bergman:" + base.id();
  impl->base = std::make_shared<const RadialWeight>(base);
  impl->precision = base.precision();
  if (base.has_power_tail()) {
    impl->power = true;
    impl->exponent = base.impl_->exponent + 1.0;
    impl->base_alpha = base.impl_->exponent;
  }
  return RadialWeight(impl);
}

RadialWeight RadialWeight::exponential(double c, double gamma) {
  if (!(c > 0.0) || !(gamma > 0.0)) fail(ErrorKind::input, "exponential weight needs c > 0 and gamma > 0");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::exponential;
  impl->id = "exp:" + shortest(c) + ":" + shortest(gamma);
  impl->c = c;
  impl->gamma = gamma;
  return RadialWeight(impl);
}

RadialWeight RadialWeight::tabulated(std::vector<double> s, std::vector<double> v) {
  if (s.size() != v.size() || s.size() < 2) fail(ErrorKind::input, "table needs at least two (s, v) samples");
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!(s[i] >= 0.0 && s[i] < 1.0)) fail(ErrorKind::input, "table abscissae must lie in [0,1)");
    if (!(v[i] > 0.0) || !std::isfinite(v[i])) fail(ErrorKind::input, "table values must be positive and finite");
    if (i > 0 && !(s[i] > s[i - 1])) fail(ErrorKind::input, "table abscissae must be strictly increasing");
  }
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::tabulated;
  impl->id = "table";
  const std::size_t n = s.size();
  impl->tu.resize(n);
  for (std::size_t i = 0; i < n; ++i) impl->tu[i] = 1.0 - s[i];
  impl->kappa = std::log(v[n - 2] / v[n - 1]) / std::log(impl->tu[n - 2] / impl->tu[n - 1]);
  if (!(impl->kappa > -1.0)) fail(ErrorKind::input, "table continuation near s=1 is not integrable");
  impl->cum.assign(n, 0.0);
  impl->cum[n - 1] = v[n - 1] * impl->tu[n - 1] / (impl->kappa + 1.0);
  for (std::size_t i = n - 1; i-- > 0;) impl->cum[i] = impl->cum[i + 1] + 0.5 * (v[i] + v[i + 1]) * (s[i + 1] - s[i]);
  impl->ts = std::move(s);
  impl->tv = std::move(v);
  return RadialWeight(impl);
}

RadialWeight RadialWeight::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::input, "cannot open weight table '" + path + "'");
  std::vector<double> s, v;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) fail(ErrorKind::input, "malformed line in weight table '" + path + "': " + line);
    s.push_back(a);
    v.push_back(b);
  }
  RadialWeight w = tabulated(std::move(s), std::move(v));
  auto impl = std::make_shared<Impl>(*w.impl_);
  impl->id = "table:" + path;
  return RadialWeight(impl);
}

RadialWeight RadialWeight::parse(const std::string& spec) {
  const std::string t = trim(spec);
  if (t.rfind("std:", 0) == 0) return standard(parse_real(t.substr(4), "weight alpha"));
  if (t.rfind("bergman:", 0) == 0) return bergman_lifted(parse(t.substr(8)));
  if (t.rfind("exp:", 0) == 0) {
    const auto parts = split(t.substr(4), ':');
    if (parts.size() != 2) fail(ErrorKind::input, "expected exp:<c>:<gamma>, got '" + t + "'");
    return exponential(parse_real(parts[0], "weight c"), parse_real(parts[1], "weight gamma"));
  }
  if (t.rfind("table:", 0) == 0) return from_table_file(t.substr(6));
  fail(ErrorKind::input, "unknown weight specification '" + t + "' (std:, bergman:, exp:, table:)");
}

RadialWeight RadialWeight::with_moment_cache(int xmax) const {
  if (xmax < 0) fail(ErrorKind::input, "moment cache size must be nonnegative");
  if (static_cast<int>(impl_->moments.size()) > xmax) return *this;
  auto impl = std::make_shared<Impl>(*impl_);
  impl->moments.clear();
  std::vector<double> m(static_cast<std::size_t>(xmax) + 1);
  for (int x = 0; x <= xmax; ++x) m[static_cast<std::size_t>(x)] = impl->moment(x);
  impl->moments = std::move(m);
  return RadialWeight(impl);
}

RadialWeight RadialWeight::with_precision(Precision p) const {
  auto impl = std::make_shared<Impl>(*impl_);
  impl->precision = p;
  return RadialWeight(impl);
}

RadialWeight::Kind RadialWeight::kind() const noexcept { return impl_->kind; }
const std::string& RadialWeight::id() const noexcept { return impl_->id; }
Precision RadialWeight::precision() const noexcept { return impl_->precision; }

double RadialWeight::alpha() const {
  if (!impl_->power) fail(ErrorKind::input, id() + " has no standard exponent");
  return impl_->base_alpha;
}

const RadialWeight& RadialWeight::base() const {
  if (!impl_->base) fail(ErrorKind::input, id() + " is not a lifted weight");
  return *impl_->base;
}

double RadialWeight::density(double s) const {
  if (!(s >= 0.0 && s < 1.0)) fail(ErrorKind::input, "density evaluated outside [0,1)");
  return impl_->density_u(1.0 - s);
}

double RadialWeight::density_from_one(double u) const {
  check_u(u);
  return impl_->density_u(u);
}

double RadialWeight::tail(double r) const {
  if (!(r >= 0.0 && r < 1.0)) fail(ErrorKind::input, "tail evaluated outside [0,1), r=" + shortest(r));
  return impl_->tail_u(1.0 - r);
}

double RadialWeight::tail_from_one(double u) const {
  check_u(u);
  return impl_->tail_u(u);
}

double RadialWeight::log_tail_from_one(double u) const {
  check_u(u);
  return impl_->log_tail_u(u);
}

double RadialWeight::vhat_x_from_one(double u, double x) const { return tail_from_one(u) / std::pow(u, x); }

double RadialWeight::moment(double x) const {
  if (impl_->precision == Precision::extended && x > 1e3 && !impl_->power) return static_cast<double>(moment_extended(x));
  return impl_->moment(x);
}

long double RadialWeight::moment_extended(double x) const {
  if (!(x >= 0.0)) fail(ErrorKind::input, "moment order must be x >= 0");
  if (impl_->power) {
    const long double a = impl_->exponent;
    const long double lx = x;
    return std::exp(std::lgamma(lx + 1) + std::lgamma(a + 1) - std::lgamma(lx + a + 2));
  }
  return impl_->quad_moment(x);
}

double RadialWeight::log_moment(double x) const {
  if (!(x >= 0.0)) fail(ErrorKind::input, "moment order must be x >= 0");
  if (impl_->power) {
    const double a = impl_->exponent;
    if (x > 1e6) {
      const double ratio = boost::math::tgamma_delta_ratio(x + 1.0, a + 1.0);
      if (ratio > 0.0 && std::isfinite(ratio)) return std::log(ratio) + std::lgamma(a + 1.0);
    }
    return std::lgamma(x + 1.0) + std::lgamma(a + 1.0) - std::lgamma(x + a + 2.0);
  }
  return std::log(impl_->quad_moment(x));
}

bool RadialWeight::has_power_tail() const noexcept { return impl_->power; }

double RadialWeight::power_tail_exponent() const {
  if (!impl_->power) fail(ErrorKind::input, id() + " has no closed-form tail");
  return impl_->exponent + 1.0;
}

// ---------------------------------------------------------------------------

const char* to_string(quad::Verdict v) noexcept {
  switch (v) {
    case quad::Verdict::finite: return "finite";
    case quad::Verdict::infinite: return "infinite";
    case quad::Verdict::indeterminate: return "indeterminate";
  }
  return "indeterminate";
}

namespace {

DoublingReport doubling_report(const RadialWeight& w, int depth) {
  DoublingReport rep;
  std::vector<double> ratios, logu, logtail;
  bool overflow = false;
  for (int k = 1; k <= depth; ++k) {
    const double u = std::ldexp(1.0, -k);
    const double lt = w.log_tail_from_one(u);
    const double lr = lt - w.log_tail_from_one(0.5 * u);
    const double ratio = std::exp(lr);
    if (!std::isfinite(ratio)) overflow = true;
    ratios.push_back(ratio);
    rep.trail.push_back({1.0 - u, ratio});
    logu.push_back(std::log(u));
    logtail.push_back(lt);
  }
  rep.sup_ratio = *std::max_element(ratios.begin(), ratios.end());
  const LineFit beta = fit_line(logu, logtail);
  rep.beta_estimate = std::max(beta.slope, 0.0);
  rep.beta_residual = beta.rms_residual;

  if (overflow) {
    rep.verdict = quad::Verdict::infinite;
    rep.sup_ratio = kInf;
    return rep;
  }
  const auto last = std::span(ratios).last(5);
  const auto [lo, hi] = std::minmax_element(last.begin(), last.end());
  if (*hi <= 1.01 * *lo) {
    rep.verdict = quad::Verdict::finite;
    return rep;
  }
  std::vector<double> ks, lr;
  for (std::size_t i = ratios.size() / 2; i < ratios.size(); ++i) {
    ks.push_back(static_cast<double>(i + 1));
    lr.push_back(std::log2(ratios[i]));
  }
  const LineFit growth = fit_line(ks, lr);
  rep.verdict = growth.slope > 0.05 ? quad::Verdict::infinite : quad::Verdict::indeterminate;
  return rep;
}

ConditionValue from_sup(const quad::GridSup& gs) {
  ConditionValue cv;
  cv.trail = gs.trail;
  cv.verdict = gs.bounded;
  if (gs.bounded == quad::Verdict::finite) {
    const double peak = std::isfinite(gs.limit) ? std::max(gs.sup, gs.limit) : gs.sup;
    cv.value = std::sqrt(std::max(peak, 0.0));
  } else if (gs.bounded == quad::Verdict::infinite) {
    cv.value = kInf;
    cv.note = "product grows without bound toward r = 1";
  } else {
    cv.value = kNaN;
    cv.note = "trail is not conclusive";
  }
  return cv;
}

quad::DivergenceVerdict to_r_form(quad::DivergenceVerdict v) {
  for (auto& p : v.trail) p.cutoff = 1.0 - p.cutoff;
  return v;
}

} // namespace

ConditionReport condition_report(const RadialWeight& w, int depth) {
  if (depth < 10) throw Error(ErrorKind::input, "weights", "condition_report requires depth >= 10");
  ConditionReport rep;
  rep.weight_id = w.id();
  rep.grid_depth = depth;
  rep.doubling = doubling_report(w, depth);

  const int td = depth + 6;
  auto vh = [&w](double u) { return w.tail_from_one(u); };
  quad::DyadicTable m1_near([&](double u) { return vh(u) / (u * u); }, td);
  quad::DyadicTable m1_far([&](double u) { return 1.0 / vh(u); }, td);
  quad::DyadicTable m2_far([&](double u) { return vh(u) / (u * u * u * u); }, td);
  quad::DyadicTable vg2_table([&](double u) { return u * u / vh(u); }, td);
  quad::DyadicTable m3_far([&](double u) { return 1.0 / (u * vh(u)); }, td);
  quad::DyadicTable m4_far([&](double u) { return w.density_from_one(u) / (u * u * u); }, td);

  rep.vg2 = to_r_form(vg2_table.verdict());
  rep.m1 = from_sup(quad::grid_sup_distance([&](double u) { return m1_near.below(u) * m1_far.above(u); }, depth));
  rep.m2 = from_sup(quad::grid_sup_distance([&](double u) { return m2_far.above(u) * vg2_table.below(u); }, depth));
  rep.m3 = from_sup(quad::grid_sup_distance([&](double u) { return vh(u) * m3_far.above(u); }, depth));
  rep.m4 = from_sup(quad::grid_sup_distance([&](double u) { return m4_far.above(u) * vg2_table.below(u); }, depth));
  return rep;
}

// ---------------------------------------------------------------------------

double star_function(const RadialWeight& w, double r) {
  if (!(r > 0.0 && r < 1.0)) throw Error(ErrorKind::input, "weights", "w* needs 0 < r < 1");
  const double u = 1.0 - r;
  const double lr = std::log1p(-u);
  quad::IntegrationSpec spec;
  spec.endpoints.singular_at_0 = true;
  spec.abs_tol = 1e-300;
  spec.rel_tol = 1e-12;
  return quad::integrate(
             [&](double t) { return (1.0 - t) * (std::log1p(-t) - lr) * w.density_from_one(t); }, 0.0, u, spec)
      .value;
}

const LemmaSeries& LemmaReport::at(const std::string& name) const {
  for (const auto& s : series)
    if (s.name == name) return s;
  throw Error(ErrorKind::input, "weights", "no lemma series named '" + name + "'");
}

LemmaReport lemma_checks(const RadialWeight& w, double q, int kmax, double xmax) {
  if (!(q > 0.0)) throw Error(ErrorKind::input, "weights", "lemma checks need q > 0");
  if (kmax < 6) throw Error(ErrorKind::input, "weights", "lemma checks need kmax >= 6");
  if (!(xmax > 1.0)) throw Error(ErrorKind::input, "weights", "lemma checks need xmax > 1");
  const DoublingReport dbl = doubling_report(w, 24);
  if (!dbl.doubling())
    throw Error(ErrorKind::hypothesis, "weights",
                w.id() + " is not doubling (tail ratio trail " + std::string(to_string(dbl.verdict)) +
                    "); the doubling-class estimates do not apply");

  LemmaReport rep;
  rep.weight_id = w.id();
  auto finish = [&rep](LemmaSeries s) {
    const auto [lo, hi] = std::minmax_element(s.ratios.begin(), s.ratios.end());
    s.min = *lo;
    s.max = *hi;
    rep.series.push_back(std::move(s));
  };

  {
    LemmaSeries s{"moment-vs-tail", {}, {}, 0, 0};
    const int m = 16;
    for (int i = 0; i < m; ++i) {
      const double x = std::pow(xmax, static_cast<double>(i) / (m - 1));
      s.args.push_back(x);
      s.ratios.push_back(w.moment(x) / w.tail_from_one(1.0 / x));
    }
    finish(std::move(s));
  }
  {
    LemmaSeries s{"star-vs-tail", {}, {}, 0, 0};
    for (int k = 1; k <= kmax; ++k) {
      const double u = std::ldexp(1.0, -k);
      s.args.push_back(1.0 - u);
      s.ratios.push_back(star_function(w, 1.0 - u) / (w.tail_from_one(u) * u));
    }
    finish(std::move(s));
  }
  auto log_term = [&](int n, double power) {
    return -q * (power * n * std::log(2.0) + w.log_moment(std::ldexp(1.0, n + 1)));
  };
  {
    LemmaSeries s{"tail-sum", {}, {}, 0, 0};
    for (int k = 1; k <= kmax; ++k) {
      const double lead = log_term(k, 3.0);
      double sum = 0.0;
      for (int n = k; n <= 62; ++n) {
        const double t = std::exp(log_term(n, 3.0) - lead);
        sum += t;
        if (t < 1e-14 * sum) break;
      }
      s.args.push_back(k);
      s.ratios.push_back(sum);
    }
    finish(std::move(s));
  }
  {
    LemmaSeries s{"head-sum", {}, {}, 0, 0};
    for (int k = 1; k <= kmax; ++k) {
      const double lead = log_term(k, 1.0);
      double sum = 0.0;
      for (int n = 1; n <= k; ++n) sum += std::exp(log_term(n, 1.0) - lead);
      s.args.push_back(k);
      s.ratios.push_back(sum);
    }
    finish(std::move(s));
  }
  {
    // Product with v/(1-s)^3 against the M2 product with v^/(1-s)^4.
    const int td = kmax + 8;
    auto vh = [&w](double u) { return w.tail_from_one(u); };
    quad::DyadicTable near([&](double u) { return u * u / vh(u); }, td);
    quad::DyadicTable density_far([&](double u) { return w.density_from_one(u) / (u * u * u); }, td);
    quad::DyadicTable tail_far([&](double u) { return vh(u) / (u * u * u * u); }, td);
    LemmaSeries s{"density-vs-tail-product", {}, {}, 0, 0};
    for (int k = 1; k <= kmax; ++k) {
      const double u = std::ldexp(1.0, -k);
      s.args.push_back(1.0 - u);
      s.ratios.push_back((density_far.above(u) * near.below(u)) / (tail_far.above(u) * near.below(u)));
    }
    finish(std::move(s));
  }
  {
    LemmaSeries s{"moment-doubling", {}, {}, 0, 0};
    const int nmax = static_cast<int>(std::min(2048.0, xmax));
    for (int n = 1; n <= nmax; n = w.has_power_tail() ? n + 1 : 2 * n) {
      s.args.push_back(n);
      s.ratios.push_back(std::exp(w.log_moment(n) - w.log_moment(2.0 * n)));
    }
    finish(std::move(s));
  }
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

nlohmann::json trail_json(const std::vector<quad::TrailPoint>& trail) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& p : trail) arr.push_back({p.cutoff, p.partial});
  return arr;
}

nlohmann::json number(double x) {
  if (std::isfinite(x)) return x;
  return shortest(x);
}

nlohmann::json condition_json(const ConditionValue& c) {
  nlohmann::json j{{"verdict", to_string(c.verdict)}, {"value", number(c.value)}, {"trail", trail_json(c.trail)}};
  if (!c.note.empty()) j["note"] = c.note;
  return j;
}

} // namespace

void to_json(nlohmann::json& j, const ConditionReport& r) {
  j = nlohmann::json{
      {"weight", r.weight_id},
      {"grid_depth", r.grid_depth},
      {"doubling",
       {{"verdict", r.doubling.doubling() ? "doubling"
                                          : (r.doubling.verdict == quad::Verdict::infinite ? "not-doubling"
                                                                                           : "indeterminate")},
        {"sup_ratio", number(r.doubling.sup_ratio)},
        {"beta_estimate", number(r.doubling.beta_estimate)},
        {"beta_residual", number(r.doubling.beta_residual)},
        {"trail", trail_json(r.doubling.trail)}}},
      {"m1", condition_json(r.m1)},
      {"m2", condition_json(r.m2)},
      {"m3", condition_json(r.m3)},
      {"m4", condition_json(r.m4)},
      {"vg2",
       {{"verdict", to_string(r.vg2.kind)},
        {"value", number(r.vg2.value)},
        {"slope", number(r.vg2.slope)},
        {"trail", trail_json(r.vg2.trail)}}},
  };
}

void to_json(nlohmann::json& j, const LemmaReport& r) {
  j = nlohmann::json{{"weight", r.weight_id}, {"series", nlohmann::json::array()}};
  for (const auto& s : r.series)
    j["series"].push_back({{"name", s.name}, {"args", s.args}, {"ratios", s.ratios}, {"min", s.min}, {"max", s.max}});
}

} // namespace hgs
