#pragma once

// Analytic symbols g given by their Maclaurin coefficients, the dyadic block
// profile B_n = 2^-n sum_{k in I(n)} k^2 |g^(k)|^2 with I(n) = [2^n, 2^(n+1)),
// and the B(2,p) norms of g - g(0) by block sums and by integral means.

#include "hgs/quadrature.hpp"

#include <nlohmann/json_fwd.hpp>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace hgs {

class Symbol {
public:
  enum class Kind { log, power, polynomial, block_weighted };

  /// g(z) = log 1/(1-z).
  static Symbol log();
  /// g'(z) = (1-z)^-b, g(0) = 0, 1/2 < b < 1.
  static Symbol power(double b, std::int64_t prefix = 8192);
  static Symbol polynomial(std::vector<double> coefficients);
  /// g^(k) = (n+1)^-theta / k for k in I(n).
  static Symbol block_weighted(double theta);
  /// log | pow:<b> | poly:<c0,c1,...> | blockw:<theta>
  static Symbol parse(const std::string& spec);

  Symbol scaled(double c) const;
  Symbol shifted(double c) const;

  Kind kind() const noexcept;
  const std::string& id() const noexcept;
  double parameter() const noexcept;  // b for power, theta for block_weighted
  double scale() const noexcept;

  double coeff(std::int64_t k) const;
  /// k^2 |g^(k)|^2
  double gtilde(std::int64_t k) const;
  /// (m+1) g^(m+1), the Maclaurin coefficients of g'.
  double derivative_coeff(std::int64_t m) const;
  /// Index of the last nonzero coefficient for polynomials, -1 otherwise.
  std::int64_t degree() const noexcept;

  /// B_n = 2^-n sum_{k in I(n)} k^2 |g^(k)|^2.
  double block(int n) const;

  /// M_2(r, g')^2 = sum_m |(m+1) g^(m+1)|^2 r^(2m), evaluated at r = 1 - u.
  double m2_squared_from_one(double u) const;

  struct Impl;

private:
  explicit Symbol(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

struct BlockProfile {
  int n_max = 0;
  std::vector<double> B;  // B_0..B_{n_max}
  std::string convention = "I(n) = [2^n, 2^(n+1))";
};

BlockProfile block_profile(const Symbol& g, int n_max);

enum class NormMethod { blocks, integral };

struct BNorm {
  double p = 2.0;
  NormMethod method = NormMethod::blocks;
  quad::Verdict verdict = quad::Verdict::indeterminate;
  double value = 0.0;         // norm at the truncation (blocks) or the computed integral norm
  double extrapolated = 0.0;  // limit of the norm, +inf when the series or integral diverges
  quad::Rate rate{};
  int n_max = 0;
  /// blocks: (n, sum_{m<=n} B_m^(p/2)) or (n, max_{m<=n} B_m^(1/2)) for p = inf;
  /// integral: (r_k, partial integral) or (r_k, M_2(r_k) (1-r_k)^(1/2)).
  std::vector<quad::TrailPoint> trail;

  bool finite() const noexcept { return verdict == quad::Verdict::finite; }
};

/// Norm of g - g(0) in B(2,p), 0 < p <= inf.
BNorm bnorm_blocks(const Symbol& g, double p, int n_max);
BNorm bnorm_integral(const Symbol& g, double p, int depth = 40);

struct LittleOh {
  bool member = false;
  double slope = 0.0;
  std::vector<double> trail;
};

/// Membership in b(2,inf): the block values decay along the last half of the profile.
LittleOh little_oh_verdict(const Symbol& g, int n_max);

void to_json(nlohmann::json& j, const BNorm& n);
void to_json(nlohmann::json& j, const BlockProfile& b);

} // namespace hgs
