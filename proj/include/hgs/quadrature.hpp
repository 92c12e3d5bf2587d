#pragma once

// One-dimensional integration on (0,1) for integrands that degenerate only at
// an endpoint, plus the dyadic probing used for every "< infinity" and
// "sup over r" quantity in the library.
//
// Two coordinate conventions appear throughout:
//   s-form   f(s) on (a,b), the natural variable;
//   u-form   h(u) = f(1 - u), the distance to the right endpoint.
// The u-form keeps full relative precision for u far below machine epsilon
// and is what the weight layer uses internally.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace hgs::quad {

using Integrand = std::function<double(double)>;

struct EndpointFlags {
  bool singular_at_0 = false;
  bool singular_at_1 = false;
};

struct IntegrationSpec {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  int max_panels = 2000;
  EndpointFlags endpoints{};

  /// Throws hgs::Error(input) unless tolerances are positive and max_panels >= 4.
  void validate() const;
};

enum class Status { converged, accuracy_not_reached, invalid_input };

struct IntegrationResult {
  double value = 0.0;
  double error = 0.0;
  Status status = Status::converged;
  int panels = 0;

  bool converged() const noexcept { return status == Status::converged; }
};

/// Adaptive Gauss-Kronrod (7/15) integration of f over (a,b).
///
/// Endpoints flagged singular are approached through geometric panels
/// [b - (b-a)2^-k, b - (b-a)2^-(k+1)]; the contribution of the innermost
/// unresolved sliver is extrapolated from the geometric decay of the last
/// panels. The rule never evaluates f at a or b.
IntegrationResult integrate(const Integrand& f, double a, double b, const IntegrationSpec& spec = {});

// ---------------------------------------------------------------------------
// Divergence classification

enum class Verdict { finite, infinite, indeterminate };
enum class RateKind { none, power, log, faster };

struct Rate {
  RateKind kind = RateKind::none;
  double exponent = 0.0;  // for power: partial sums grow like 2^(k * exponent)
};

struct TrailPoint {
  double cutoff = 0.0;
  double partial = 0.0;
};

struct DivergenceVerdict {
  Verdict kind = Verdict::indeterminate;
  double value = 0.0;  // limit, when finite
  double error = 0.0;
  Rate rate{};         // growth descriptor, when infinite
  double slope = 0.0;  // least-squares slope of log2|increment| over the last half
  std::vector<TrailPoint> trail;
  std::string note;    // reason for an indeterminate outcome

  bool finite() const noexcept { return kind == Verdict::finite; }
  bool infinite() const noexcept { return kind == Verdict::infinite; }
};

/// Classification of a sequence of increments d_1..d_n of a partial-sum trail.
struct IncrementFit {
  Verdict verdict = Verdict::indeterminate;
  double slope = 0.0;
  Rate rate{};
  double tail = 0.0;        // extrapolated sum of the unseen increments (finite case)
  double tail_error = 0.0;
  std::string note;
};

/// Fits log2|d_k| against k over the last half of the sequence.
/// slope > -0.05 is read as divergence (log rate when |slope| <= 0.05, power
/// otherwise, "faster" when the slope itself keeps increasing); a sign change
/// in the fitted window or a NaN is indeterminate. Trailing exact zeros mean
/// the sum has terminated.
IncrementFit classify_increments(std::span<const double> increments);

/// Threshold on the fitted slope separating convergence from divergence.
inline constexpr double kDivergenceSlope = -0.05;

enum class Side { toward_1, toward_0 };

/// Partial integrals over cutoffs r_k = 1 - 2^-k (toward_1, integrating from 0)
/// or r_k = 2^-k (toward_0, integrating down from 1), k = 1..depth.
DivergenceVerdict divergence_probe(const Integrand& f, Side side, int depth, const IntegrationSpec& panel_spec = {});

/// Dyadic summation of sum_{k>=1} term(k) in blocks [2^n, 2^(n+1)), n = 0..max_block,
/// with the same classification and geometric tail as divergence_probe.
/// Trail cutoffs are the block ends 2^(n+1).
DivergenceVerdict dyadic_series(const std::function<double(std::int64_t)>& term, int max_block);

// ---------------------------------------------------------------------------
// Dyadic table of a u-form integrand

/// Panel integrals of h over [2^-(k+1), 2^-k], k = 0..depth-1, with prefix and
/// suffix sums. above(u) = int_u^1 h, below(u) = int_0^u h. below() is +inf
/// when the integral diverges at 0 and NaN when the probe is indeterminate.
class DyadicTable {
public:
  DyadicTable(Integrand h, int depth, const IntegrationSpec& spec = {});

  double above(double u) const;
  double below(double u) const;
  double total() const { return below(1.0); }

  const DivergenceVerdict& verdict() const noexcept { return verdict_; }
  int depth() const noexcept { return static_cast<int>(panels_.size()); }
  double panel(int k) const { return panels_.at(static_cast<std::size_t>(k)); }

private:
  double partial(double lo, double hi) const;

  Integrand h_;
  IntegrationSpec spec_;
  std::vector<double> panels_;
  std::vector<double> upper_;  // upper_[k] = int_{2^-k}^1 h
  std::vector<double> lower_;  // lower_[k] = int_0^{2^-k} h
  DivergenceVerdict verdict_;
};

// ---------------------------------------------------------------------------
// Suprema on the geometric grid

struct GridSup {
  double sup = 0.0;
  double arg = 0.0;
  double limit = 0.0;  // extrapolated limit r -> 1 when the maximum sits at the grid end
  Verdict bounded = Verdict::indeterminate;
  std::vector<TrailPoint> trail;  // (r_k, f(r_k))
};

/// Supremum of f over r_k = 1 - 2^-k, k = 1..depth, refined by a bracketed
/// one-dimensional search when the grid maximum is interior.
GridSup grid_sup(const Integrand& f, int depth);

/// Same, with f supplied in u-form (the grid is u_k = 2^-k); arg is reported as r.
GridSup grid_sup_distance(const Integrand& h, int depth);

} // namespace hgs::quad
