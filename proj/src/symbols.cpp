#include "hgs/symbols.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <nlohmann/json.hpp>

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

namespace hgs {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "symbols", msg); }

int block_of(std::int64_t k) { return 63 - std::countl_zero(static_cast<std::uint64_t>(k)); }

// Gauss series 2F1(a, b; c; y) for |y| <= 1/2.
double hyp2f1_series(double a, double b, double c, double y) {
  double term = 1.0, sum = 1.0;
  for (int n = 0; n < 1000; ++n) {
    term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * y;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

} // namespace

struct Symbol::Impl {
  Kind kind = Kind::log;
  std::string id;
  double param = 0.0;
  double scale = 1.0;
  double constant = 0.0;
  std::vector<double> poly;
  std::vector<long double> c;  // power kind: derivative coefficients c_0..c_{prefix-1}

  long double power_c(std::int64_t m) const {
    if (m < static_cast<std::int64_t>(c.size())) return c[static_cast<std::size_t>(m)];
    const long double b = param;
    const long double lm = static_cast<long double>(m);
    return std::exp(std::lgamma(lm + b) - std::lgamma(b) - std::lgamma(lm + 1));
  }

  // Unscaled g^(k), k >= 1.
  double raw(std::int64_t k) const {
    switch (kind) {
      case Kind::log: return 1.0 / static_cast<double>(k);
      case Kind::power: return static_cast<double>(power_c(k - 1) / static_cast<long double>(k));
      case Kind::polynomial: return k < static_cast<std::int64_t>(poly.size()) ? poly[static_cast<std::size_t>(k)] : 0.0;
      case Kind::block_weighted:
        return std::pow(static_cast<double>(block_of(k) + 1), -param) / static_cast<double>(k);
    }
    return kNaN;
  }

  // Unscaled sum_{k in I(n)} k^2 |g^(k)|^2.
  long double block_sum(int n) const {
    const std::int64_t lo = std::int64_t{1} << n;
    const std::int64_t hi = std::int64_t{1} << (n + 1);
    switch (kind) {
      case Kind::log: return static_cast<long double>(lo);
      case Kind::block_weighted: {
        const long double a = std::pow(static_cast<long double>(n + 1), -static_cast<long double>(param));
        return a * a * static_cast<long double>(lo);
      }
      case Kind::polynomial: {
        long double s = 0.0L;
        for (std::int64_t k = lo; k < hi && k < static_cast<std::int64_t>(poly.size()); ++k) {
          const long double t = static_cast<long double>(k) * poly[static_cast<std::size_t>(k)];
          s += t * t;
        }
        return s;
      }
      case Kind::power: {
        // k g^(k) = c_{k-1}; run the recurrence across the block.
        const long double b = param;
        long double cm = power_c(lo - 1);
        long double s = 0.0L;
        for (std::int64_t m = lo - 1; m < hi - 1; ++m) {
          if (m > lo - 1) cm *= (static_cast<long double>(m) - 1.0L + b) / static_cast<long double>(m);
          s += cm * cm;
        }
        return s;
      }
    }
    return 0.0L;
  }

  // Unscaled M_2(1-u, g')^2.
  double m2_squared(double u) const {
    if (u == 1.0) return raw(1) * raw(1);
    const double lr = std::log1p(-u);  // log r
    const double one_minus_r2 = u * (2.0 - u);
    switch (kind) {
      case Kind::log: return 1.0 / one_minus_r2;
      case Kind::polynomial: {
        double s = 0.0;
        for (std::size_t k = 1; k < poly.size(); ++k) {
          const double d = static_cast<double>(k) * poly[k];
          s += d * d * std::exp(2.0 * static_cast<double>(k - 1) * lr);
        }
        return s;
      }
      case Kind::block_weighted: {
        double s = 0.0;
        for (int n = 0; n < 62; ++n) {
          const double lo = std::ldexp(1.0, n);
          const double a = std::pow(n + 1.0, -param);
          const double lead = std::exp(2.0 * (lo - 1.0) * lr);
          const double part = a * a * lead * (-std::expm1(2.0 * lo * lr)) / one_minus_r2;
          s += part;
          if (lead < 1e-18) break;
        }
        return s;
      }
      case Kind::power: {
        const double b = param;
        const double x = std::exp(2.0 * lr);
        if (x <= 0.5) return hyp2f1_series(b, b, 1.0, x);
        // Connection formula at x = 1 for 2F1(b, b; 1; x).
        const double y = one_minus_r2;
        const double ga = std::tgamma(1.0 - 2.0 * b) / std::pow(std::tgamma(1.0 - b), 2);
        const double gb = std::tgamma(2.0 * b - 1.0) / std::pow(std::tgamma(b), 2);
        return ga * hyp2f1_series(b, b, 2.0 * b, y) +
               gb * std::pow(y, 1.0 - 2.0 * b) * hyp2f1_series(1.0 - b, 1.0 - b, 2.0 - 2.0 * b, y);
      }
    }
    return kNaN;
  }
};

Symbol Symbol::log() {
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::log;
  impl->id = "log";
  return Symbol(impl);
}

Symbol Symbol::power(double b, std::int64_t prefix) {
  if (!(b > 0.5 && b < 1.0)) fail(ErrorKind::input, "power symbol needs 1/2 < b < 1, got " + shortest(b));
  if (prefix < 1) fail(ErrorKind::input, "power symbol prefix must be positive");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::power;
  impl->id = "pow:" + shortest(b);
  impl->param = b;
  impl->c.resize(static_cast<std::size_t>(prefix));
  impl->c[0] = 1.0L;
  for (std::size_t m = 1; m < impl->c.size(); ++m)
    impl->c[m] = impl->c[m - 1] * (static_cast<long double>(m) - 1.0L + b) / static_cast<long double>(m);
  return Symbol(impl);
}

Symbol Symbol::polynomial(std::vector<double> coefficients) {
  for (double c : coefficients)
    if (!std::isfinite(c)) fail(ErrorKind::input, "polynomial coefficients must be finite");
  while (coefficients.size() > 1 && coefficients.back() == 0.0) coefficients.pop_back();
  if (coefficients.empty()) coefficients.push_back(0.0);
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::polynomial;
  impl->id = "poly:";
  for (std::size_t i = 0; i < coefficients.size(); ++i) impl->id += (i ? "," : "") + shortest(coefficients[i]);
  impl->constant = coefficients[0];
  impl->poly = std::move(coefficients);
  return Symbol(impl);
}

Symbol Symbol::block_weighted(double theta) {
  if (!std::isfinite(theta)) fail(ErrorKind::input, "block weight exponent must be finite");
  auto impl = std::make_shared<Impl>();
  impl->kind = Kind::block_weighted;
  impl->id = "blockw:" + shortest(theta);
  impl->param = theta;
  return Symbol(impl);
}

Symbol Symbol::parse(const std::string& spec) {
  const std::string t = trim(spec);
  if (t == "log") return log();
  if (t.rfind("pow:", 0) == 0) return power(parse_real(t.substr(4), "power exponent"));
  if (t.rfind("blockw:", 0) == 0) return block_weighted(parse_real(t.substr(7), "block exponent"));
  if (t.rfind("poly:", 0) == 0) {
    std::vector<double> c;
    for (const auto& part : split(t.substr(5), ',')) c.push_back(parse_real(part, "polynomial coefficient"));
    return polynomial(std::move(c));
  }
  fail(ErrorKind::input, "unknown symbol specification '" + t + "' (log, pow:, poly:, blockw:)");
}

Symbol Symbol::scaled(double c) const {
  if (!std::isfinite(c)) fail(ErrorKind::input, "scale must be finite");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->scale *= c;
  impl->constant *= c;
  impl->id = shortest(c) + "*" + impl_->id;
  return Symbol(impl);
}

Symbol Symbol::shifted(double c) const {
  if (!std::isfinite(c)) fail(ErrorKind::input, "shift must be finite");
  auto impl = std::make_shared<Impl>(*impl_);
  impl->constant += c;
  impl->id = impl_->id + "+" + shortest(c);
  return Symbol(impl);
}

Symbol::Kind Symbol::kind() const noexcept { return impl_->kind; }
const std::string& Symbol::id() const noexcept { return impl_->id; }
double Symbol::parameter() const noexcept { return impl_->param; }
double Symbol::scale() const noexcept { return impl_->scale; }

double Symbol::coeff(std::int64_t k) const {
  if (k < 0) fail(ErrorKind::input, "coefficient index must be nonnegative");
  if (k == 0) return impl_->constant;
  return impl_->scale * impl_->raw(k);
}

double Symbol::gtilde(std::int64_t k) const {
  const double c = coeff(k) * static_cast<double>(k);
  return c * c;
}

double Symbol::derivative_coeff(std::int64_t m) const {
  if (m < 0) fail(ErrorKind::input, "coefficient index must be nonnegative");
  if (impl_->kind == Kind::power) return impl_->scale * static_cast<double>(impl_->power_c(m));
  return static_cast<double>(m + 1) * coeff(m + 1);
}

std::int64_t Symbol::degree() const noexcept {
  if (impl_->kind != Kind::polynomial) return -1;
  if (impl_->scale == 0.0) return 0;
  return static_cast<std::int64_t>(impl_->poly.size()) - 1;
}

double Symbol::block(int n) const {
  if (n < 0 || n > 40) fail(ErrorKind::input, "block index must lie in [0, 40]");
  const long double s2 = static_cast<long double>(impl_->scale) * impl_->scale;
  return static_cast<double>(std::ldexp(impl_->block_sum(n) * s2, -n));
}

double Symbol::m2_squared_from_one(double u) const {
  if (!(u > 0.0 && u <= 1.0)) fail(ErrorKind::input, "M_2 evaluated outside 0 <= r < 1");
  return impl_->scale * impl_->scale * impl_->m2_squared(u);
}

// ---------------------------------------------------------------------------

BlockProfile block_profile(const Symbol& g, int n_max) {
  if (n_max < 1 || n_max > 40) fail(ErrorKind::input, "block_profile needs 1 <= n_max <= 40");
  BlockProfile out;
  out.n_max = n_max;
  for (int n = 0; n <= n_max; ++n) out.B.push_back(g.block(n));
  return out;
}

namespace {

void check_p(double p) {
  if (!(p > 0.0)) fail(ErrorKind::input, "B(2,p) needs p > 0, got " + shortest(p));
}

} // namespace

BNorm bnorm_blocks(const Symbol& g, double p, int n_max) {
  check_p(p);
  const BlockProfile prof = block_profile(g, n_max);
  BNorm out;
  out.p = p;
  out.method = NormMethod::blocks;
  out.n_max = n_max;
  if (std::isinf(p)) {
    double best = 0.0;
    std::vector<double> ks, lb;
    for (int n = 0; n <= n_max; ++n) {
      const double b = prof.B[static_cast<std::size_t>(n)];
      best = std::max(best, std::sqrt(b));
      out.trail.push_back({static_cast<double>(n), best});
      if (n >= n_max / 2 && b > 0.0) {
        ks.push_back(n);
        lb.push_back(std::log2(b));
      }
    }
    out.value = best;
    const bool grows = ks.size() >= 3 && fit_line(ks, lb).slope > 0.05;
    out.verdict = grows ? quad::Verdict::infinite : quad::Verdict::finite;
    out.extrapolated = grows ? kInf : best;
    if (grows) out.rate = {quad::RateKind::power, fit_line(ks, lb).slope};
    return out;
  }
  std::vector<double> terms;
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    const double t = std::pow(prof.B[static_cast<std::size_t>(n)], 0.5 * p);
    terms.push_back(t);
    sum += t;
    out.trail.push_back({static_cast<double>(n), sum});
  }
  out.value = std::pow(sum, 1.0 / p);
  const quad::IncrementFit fit = quad::classify_increments(terms);
  out.verdict = fit.verdict;
  out.rate = fit.rate;
  if (fit.verdict == quad::Verdict::finite)
    out.extrapolated = std::pow(sum + fit.tail, 1.0 / p);
  else
    out.extrapolated = fit.verdict == quad::Verdict::infinite ? kInf : kNaN;
  return out;
}

BNorm bnorm_integral(const Symbol& g, double p, int depth) {
  check_p(p);
  if (depth < 8) fail(ErrorKind::input, "integral norm needs depth >= 8");
  BNorm out;
  out.p = p;
  out.method = NormMethod::integral;
  out.n_max = depth;
  if (std::isinf(p)) {
    auto h = [&g](double u) { return std::sqrt(g.m2_squared_from_one(u) * u); };
    const quad::GridSup gs = quad::grid_sup_distance(h, depth);
    // The grid starts at r = 1/2; the remaining range is searched directly.
    const auto [u_best, neg] =
        boost::math::tools::brent_find_minima([&h](double u) { return -h(u); }, 0.5, 1.0, 40);
    (void)u_best;
    double best = std::max({gs.sup, -neg, h(1.0)});
    if (gs.bounded == quad::Verdict::finite && std::isfinite(gs.limit)) best = std::max(best, gs.limit);
    out.trail = gs.trail;
    out.verdict = gs.bounded;
    out.value = best;
    out.extrapolated = gs.bounded == quad::Verdict::infinite ? kInf : best;
    return out;
  }
  quad::DyadicTable table(
      [&g, p](double u) { return std::pow(g.m2_squared_from_one(u), 0.5 * p) * std::pow(u, 0.5 * p - 1.0); }, depth);
  const auto& v = table.verdict();
  out.verdict = v.kind;
  out.rate = v.rate;
  for (const auto& t : v.trail) out.trail.push_back({1.0 - t.cutoff, t.partial});
  const double partial = v.trail.empty() ? 0.0 : v.trail.back().partial;
  out.value = std::pow(partial, 1.0 / p);
  if (v.finite()) {
    out.value = std::pow(v.value, 1.0 / p);
    out.extrapolated = out.value;
  } else {
    out.extrapolated = v.infinite() ? kInf : kNaN;
  }
  return out;
}

LittleOh little_oh_verdict(const Symbol& g, int n_max) {
  if (n_max < 10) fail(ErrorKind::input, "little_oh_verdict needs n_max >= 10");
  LittleOh out;
  out.trail = block_profile(g, n_max).B;
  const std::size_t n = out.trail.size();
  if (out.trail[n - 1] == 0.0 && out.trail[n - 2] == 0.0) {
    out.member = true;
    out.slope = -kInf;
    return out;
  }
  std::vector<double> ks, lb;
  for (std::size_t i = n - 1 - static_cast<std::size_t>(n_max / 2); i < n; ++i) {
    if (out.trail[i] <= 0.0) continue;
    ks.push_back(static_cast<double>(i));
    lb.push_back(std::log2(out.trail[i]));
  }
  out.slope = fit_line(ks, lb).slope;
  out.member = out.slope < -0.1;
  return out;
}

void to_json(nlohmann::json& j, const BNorm& n) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return shortest(x);
  };
  nlohmann::json trail = nlohmann::json::array();
  for (const auto& t : n.trail) trail.push_back({t.cutoff, t.partial});
  j = nlohmann::json{{"p", num(n.p)},
                     {"method", n.method == NormMethod::blocks ? "blocks" : "integral"},
                     {"verdict", n.finite() ? "finite" : (n.verdict == quad::Verdict::infinite ? "infinite" : "indeterminate")},
                     {"value", num(n.value)},
                     {"extrapolated", num(n.extrapolated)},
                     {"n_max", n.n_max},
                     {"trail", trail}};
}

void to_json(nlohmann::json& j, const BlockProfile& b) {
  j = nlohmann::json{{"n_max", b.n_max}, {"convention", b.convention}, {"B", b.B}};
}

} // namespace hgs
