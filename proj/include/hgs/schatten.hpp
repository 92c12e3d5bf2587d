#pragma once

// Singular values of operator truncations, S_p norms and N-sweeps comparing
// ||H_g||_{S_p} with the block norm of g.

#include "hgs/operators.hpp"

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace hgs {

struct SingularSpectrum {
  std::vector<double> values;  // descending
  int N = 0;
  /// ||A V - U S||_F for small matrices, | ||A||_F - ||s||_2 | otherwise.
  double residual = 0.0;
  double top() const { return values.empty() ? 0.0 : values.front(); }
};

/// Matrices with at most this many columns get the full backward-error residual.
inline constexpr int kFullResidualLimit = 512;

SingularSpectrum singular_values(const Eigen::MatrixXd& m, double tol = 1e-12);
SingularSpectrum singular_values(const OperatorMatrix& m, double tol = 1e-12);

/// (sum s_i^p)^(1/p), or max s_i for p = inf; p < 1 gives the quasi-norm.
double schatten_norm(const SingularSpectrum& s, double p);

struct Tolerances {
  double stabilization = 0.02;  // relative change of the ratio across the final doubling
  double spread = 8.0;          // max/min ratio within a family
  double svd = 1e-12;
  double frobenius = 1e-10;
  double row_tail = 1e-6;

  bool operator==(const Tolerances&) const = default;
};

/// Spectra keyed by (weight, symbol, basis, N).
class SpectrumCache {
public:
  std::shared_ptr<const SingularSpectrum> find(const std::string& key) const;
  void insert(const std::string& key, std::shared_ptr<const SingularSpectrum> s);
  std::size_t size() const;

private:
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<const SingularSpectrum>> map_;
};

struct SweepRow {
  int N = 0;
  double p = 2.0;
  double s_p = 0.0;
  double b_norm = 0.0;  // partial block norm through n_max = log2(N) - 1
  double ratio = 0.0;
  double rel_change = NAN;  // relative change of ratio from the previous N
  bool monotone = true;     // s_p did not decrease from the previous N
  double row_tail_mass = 0.0;
};

struct SweepTable {
  std::string weight_id;
  std::string symbol_id;
  std::string stamp;  // "outside theorem hypotheses: ..." when the weight fails them
  std::vector<SweepRow> rows;  // ordered by (p, N)

  std::vector<SweepRow> group(double p) const;
  int monotone_violations() const;
};

struct SweepOptions {
  int threads = 1;
  Tolerances tol{};
  SpectrumCache* cache = nullptr;
  const ConditionReport* report = nullptr;
};

/// N_list strictly increasing powers of two >= 4.
SweepTable sweep(const RadialWeight& w, const Symbol& g, const std::vector<double>& p_list,
                 const std::vector<int>& N_list, const SweepOptions& opt = {});

/// sum_{n <= n_max} |<H_g b_n, sigma_n>_{D_v}|^p over the block basis b_n and the sigma family.
double sigma_pairing(const RadialWeight& w, const Symbol& g, int n_max, double p);

/// Runs f(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& f);

std::string format_p(double p);
void to_json(nlohmann::json& j, const SweepTable& t);
/// weight,symbol,N,p,s_p,b_norm,ratio,rel_change,monotone,row_tail_mass,stamp
std::string sweep_csv(const std::vector<SweepTable>& tables);

} // namespace hgs
