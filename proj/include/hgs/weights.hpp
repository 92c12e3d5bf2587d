#pragma once

// Radial weights v on [0,1), their tails v^(r) = int_r^1 v and moments
// v_x = int_0^1 s^x v(s) ds, and the Muckenhoupt-type condition evaluators.
//
// Every evaluator also exists in u-form (u = 1 - r) so that quantities close
// to the boundary keep their relative precision.

#include "hgs/quadrature.hpp"

#include <nlohmann/json_fwd.hpp>

#include <memory>
#include <string>
#include <vector>

namespace hgs {

enum class Precision { standard, extended };

class RadialWeight {
public:
  enum class Kind { standard, bergman_lifted, exponential, tabulated };

  /// v(s) = (1-s)^alpha, alpha > -1.
  static RadialWeight standard(double alpha);
  /// v(s) = (1-s) w(s).
  static RadialWeight bergman_lifted(const RadialWeight& base);
  /// v(s) = exp(-c / (1-s)^gamma).
  static RadialWeight exponential(double c, double gamma);
  /// Linear interpolation of (s_i, v_i); power-law continuation past the last sample.
  static RadialWeight tabulated(std::vector<double> s, std::vector<double> v);
  /// Two-column text file "s v(s)", '#' comments allowed.
  static RadialWeight from_table_file(const std::string& path);
  /// std:<alpha> | bergman:<spec> | exp:<c>:<gamma> | table:<path>
  static RadialWeight parse(const std::string& spec);

  /// Copy whose integer moments 0..xmax are precomputed.
  RadialWeight with_moment_cache(int xmax) const;
  RadialWeight with_precision(Precision p) const;

  Kind kind() const noexcept;
  const std::string& id() const noexcept;
  Precision precision() const noexcept;
  double alpha() const;                 // standard kind (and lifted standard: alpha of the base)
  const RadialWeight& base() const;     // bergman_lifted kind

  double density(double s) const;
  double density_from_one(double u) const;

  double tail(double r) const;
  double tail_from_one(double u) const;
  double log_tail_from_one(double u) const;

  /// V^_x(r) = v^(r) / (1-r)^x in u-form.
  double vhat_x_from_one(double u, double x) const;

  double moment(double x) const;
  long double moment_extended(double x) const;
  double log_moment(double x) const;

  /// Closed-form exponent when v^(1-u) = u^e / e exactly.
  bool has_power_tail() const noexcept;
  double power_tail_exponent() const;

  struct Impl;

private:
  explicit RadialWeight(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

// ---------------------------------------------------------------------------

struct DoublingReport {
  quad::Verdict verdict = quad::Verdict::indeterminate;  // finite means doubling
  double sup_ratio = 0.0;
  double beta_estimate = 0.0;
  double beta_residual = 0.0;
  std::vector<quad::TrailPoint> trail;  // (r_k, v^(r_k)/v^((1+r_k)/2))

  bool doubling() const noexcept { return verdict == quad::Verdict::finite; }
};

struct ConditionValue {
  quad::Verdict verdict = quad::Verdict::indeterminate;
  double value = 0.0;  // the square root of the supremum of the product
  std::vector<quad::TrailPoint> trail;  // (r_k, product at r_k)
  std::string note;

  bool finite() const noexcept { return verdict == quad::Verdict::finite; }
};

struct ConditionReport {
  std::string weight_id;
  DoublingReport doubling;
  ConditionValue m1, m2, m3, m4;
  quad::DivergenceVerdict vg2;
  int grid_depth = 0;
};

ConditionReport condition_report(const RadialWeight& w, int depth = 24);

struct LemmaSeries {
  std::string name;
  std::vector<double> args;
  std::vector<double> ratios;
  double min = 0.0;
  double max = 0.0;
};

struct LemmaReport {
  std::string weight_id;
  std::vector<LemmaSeries> series;

  const LemmaSeries& at(const std::string& name) const;
};

/// Two-sided ratio sequences for the doubling-class estimates. Refuses
/// weights whose doubling verdict is not positive.
LemmaReport lemma_checks(const RadialWeight& w, double q, int kmax, double xmax);

/// w*(r) = int_r^1 s log(s/r) w(s) ds.
double star_function(const RadialWeight& w, double r);

void to_json(nlohmann::json& j, const ConditionReport& report);
void to_json(nlohmann::json& j, const LemmaReport& report);
const char* to_string(quad::Verdict v) noexcept;

} // namespace hgs
