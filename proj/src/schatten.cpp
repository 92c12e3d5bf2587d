#include "hgs/schatten.hpp"

#include "hgs/error.hpp"
#include "hgs/util.hpp"

#include <nlohmann/json.hpp>

#include <atomic>
#include <bit>
#include <cmath>
#include <sstream>
#include <thread>

namespace hgs {

namespace {

[[noreturn]] void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, "schatten", msg); }

std::string cache_key(const OperatorMatrix& m) {
  return m.weight_id + "|" + m.symbol_id + "|" + m.basis + "|" + std::to_string(m.entries.rows()) + "x" +
         std::to_string(m.entries.cols());
}

} // namespace

SingularSpectrum singular_values(const Eigen::MatrixXd& m, double tol) {
  if (m.size() == 0) fail(ErrorKind::input, "empty matrix");
  if (!m.allFinite()) fail(ErrorKind::input, "matrix has non-finite entries");
  SingularSpectrum s;
  s.N = static_cast<int>(std::max(m.rows(), m.cols()));
  const bool full = m.cols() <= kFullResidualLimit && m.rows() <= kFullResidualLimit;
  Eigen::BDCSVD<Eigen::MatrixXd> svd;
  svd.compute(m, full ? (Eigen::ComputeThinU | Eigen::ComputeThinV) : 0);
  if (svd.info() != Eigen::Success)
    fail(ErrorKind::nonconvergence, "bidiagonal divide-and-conquer SVD did not converge on a " +
                                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()) + " matrix");
  const Eigen::VectorXd& sv = svd.singularValues();
  s.values.assign(sv.data(), sv.data() + sv.size());
  if (full) {
    s.residual = (m * svd.matrixV() - svd.matrixU() * sv.asDiagonal()).norm();
  } else {
    s.residual = std::abs(m.norm() - sv.norm());
  }
  const double top = s.top();
  if (s.residual > std::max(1e-8, 1e4 * tol) * std::max(top, 1e-300))
    fail(ErrorKind::nonconvergence, "SVD residual " + shortest(s.residual) + " exceeds 1e-8 of the top value " +
                                        shortest(top));
  return s;
}

SingularSpectrum singular_values(const OperatorMatrix& m, double tol) { return singular_values(m.entries, tol); }

double schatten_norm(const SingularSpectrum& s, double p) {
  if (!(p > 0.0)) fail(ErrorKind::input, "Schatten exponent must be positive");
  if (std::isinf(p)) return s.top();
  const double top = s.top();
  if (top == 0.0) return 0.0;
  long double acc = 0.0L;
  for (double v : s.values) acc += std::pow(static_cast<long double>(v / top), static_cast<long double>(p));
  return top * static_cast<double>(std::pow(acc, 1.0L / static_cast<long double>(p)));
}

std::shared_ptr<const SingularSpectrum> SpectrumCache::find(const std::string& key) const {
  std::lock_guard lock(mu_);
  auto it = map_.find(key);
  return it == map_.end() ? nullptr : it->second;
}

void SpectrumCache::insert(const std::string& key, std::shared_ptr<const SingularSpectrum> s) {
  std::lock_guard lock(mu_);
  map_.emplace(key, std::move(s));
}

std::size_t SpectrumCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

void parallel_for(int count, int threads, const std::function<void(int)>& f) {
  threads = std::max(1, std::min(threads, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          f(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

std::vector<SweepRow> SweepTable::group(double p) const {
  std::vector<SweepRow> out;
  for (const auto& r : rows)
    if (r.p == p) out.push_back(r);
  return out;
}

int SweepTable::monotone_violations() const {
  int n = 0;
  for (const auto& r : rows)
    if (!r.monotone) ++n;
  return n;
}

SweepTable sweep(const RadialWeight& w, const Symbol& g, const std::vector<double>& p_list,
                 const std::vector<int>& N_list, const SweepOptions& opt) {
  if (p_list.empty() || N_list.empty()) fail(ErrorKind::input, "empty p or N list");
  for (std::size_t i = 0; i < N_list.size(); ++i) {
    const int N = N_list[i];
    if (N < 4 || !std::has_single_bit(static_cast<unsigned>(N)))
      fail(ErrorKind::input, "N values must be powers of two >= 4");
    if (i > 0 && N <= N_list[i - 1]) fail(ErrorKind::input, "N list must be strictly increasing");
  }
  for (double p : p_list)
    if (!(p > 0.0)) fail(ErrorKind::input, "Schatten exponent must be positive");

  ConditionReport local;
  const ConditionReport* rep = opt.report;
  if (rep == nullptr) {
    local = condition_report(w, 24);
    rep = &local;
  }

  const int count = static_cast<int>(N_list.size());
  std::vector<std::shared_ptr<const SingularSpectrum>> spectra(static_cast<std::size_t>(count));
  std::vector<double> tails(static_cast<std::size_t>(count));
  std::vector<std::string> stamps(static_cast<std::size_t>(count));
  // Largest N first so the costliest cell starts early.
  parallel_for(count, opt.threads, [&](int idx) {
    const int i = count - 1 - idx;
    const OperatorMatrix m = hg_matrix(w, g, N_list[static_cast<std::size_t>(i)], BasisKind::monomial,
                                       HypothesisPolicy::stamp, rep);
    tails[static_cast<std::size_t>(i)] = m.row_tail_mass;
    stamps[static_cast<std::size_t>(i)] = m.stamp;
    const std::string key = cache_key(m);
    std::shared_ptr<const SingularSpectrum> s = opt.cache ? opt.cache->find(key) : nullptr;
    if (!s) {
      s = std::make_shared<const SingularSpectrum>(singular_values(m, opt.tol.svd));
      if (opt.cache) opt.cache->insert(key, s);
    }
    spectra[static_cast<std::size_t>(i)] = s;
  });

  SweepTable t;
  t.weight_id = w.id();
  t.symbol_id = g.id();
  if (!stamps.front().empty()) t.stamp = "outside theorem hypotheses: " + stamps.front();
  for (double p : p_list) {
    const std::size_t first = t.rows.size();
    for (int i = 0; i < count; ++i) {
      SweepRow r;
      r.N = N_list[static_cast<std::size_t>(i)];
      r.p = p;
      r.s_p = schatten_norm(*spectra[static_cast<std::size_t>(i)], p);
      const int n_max = std::max(1, static_cast<int>(std::bit_width(static_cast<unsigned>(r.N))) - 2);
      r.b_norm = bnorm_blocks(g, p, n_max).value;
      r.ratio = r.s_p / r.b_norm;
      r.row_tail_mass = tails[static_cast<std::size_t>(i)];
      if (t.rows.size() > first) {
        const SweepRow* prev = &t.rows.back();
        r.rel_change = std::abs(r.ratio - prev->ratio) / std::abs(prev->ratio);
        r.monotone = r.s_p >= prev->s_p * (1.0 - 1e-12);
      }
      t.rows.push_back(r);
    }
  }
  return t;
}

double sigma_pairing(const RadialWeight& w, const Symbol& g, int n_max, double p) {
  if (n_max < 0 || n_max > 24) fail(ErrorKind::input, "n_max must lie in [0, 24]");
  if (!(p > 0.0)) fail(ErrorKind::input, "exponent must be positive");
  double total = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    CoefficientFunction sigma;
    try {
      sigma = basis_element(w, BasisKind::sigma, n, &g);
    } catch (const Error&) {
      continue;  // g' vanishes on the block
    }
    const CoefficientFunction b = basis_element(w, BasisKind::block, n);
    const long lo = (1L << n) - 1, hi = (2L << n) - 1;
    double inner = 0.0;
    for (long j = lo; j < hi; ++j) {
      double mu = 0.0;
      for (long k = lo; k < hi; ++k) mu += b.c[static_cast<std::size_t>(k)] / static_cast<double>(k + j + 1);
      const double jj = static_cast<double>(j);
      const double nsq = j == 0 ? 1.0 : 2.0 * jj * jj * w.moment(2.0 * jj - 1.0);
      inner += g.derivative_coeff(j) * mu * sigma.c[static_cast<std::size_t>(j)] * nsq;
    }
    total += std::pow(std::abs(inner), p);
  }
  return total;
}

std::string format_p(double p) { return std::isinf(p) ? "inf" : shortest(p); }

void to_json(nlohmann::json& j, const SweepTable& t) {
  auto num = [](double x) -> nlohmann::json {
    if (std::isfinite(x)) return x;
    return std::isnan(x) ? "nan" : (x > 0 ? "inf" : "-inf");
  };
  j = nlohmann::json{{"weight", t.weight_id}, {"symbol", t.symbol_id}, {"stamp", t.stamp}};
  auto& rows = j["rows"] = nlohmann::json::array();
  for (const auto& r : t.rows)
    rows.push_back({{"N", r.N},
                    {"p", format_p(r.p)},
                    {"s_p", num(r.s_p)},
                    {"b_norm", num(r.b_norm)},
                    {"ratio", num(r.ratio)},
                    {"rel_change", num(r.rel_change)},
                    {"monotone", r.monotone},
                    {"row_tail_mass", num(r.row_tail_mass)}});
}

std::string sweep_csv(const std::vector<SweepTable>& tables) {
  std::ostringstream os;
  os << "weight,symbol,N,p,s_p,b_norm,ratio,rel_change,monotone,row_tail_mass,stamp\n";
  for (const auto& t : tables)
    for (const auto& r : t.rows)
      os << csv_field(t.weight_id) << ',' << csv_field(t.symbol_id) << ',' << r.N << ',' << format_p(r.p) << ','
         << precise(r.s_p) << ',' << precise(r.b_norm) << ',' << precise(r.ratio) << ',' << precise(r.rel_change)
         << ',' << (r.monotone ? "true" : "false") << ',' << precise(r.row_tail_mass) << ',' << csv_field(t.stamp)
         << '\n';
  return os.str();
}

} // namespace hgs
