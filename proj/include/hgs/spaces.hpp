#pragma once

// Elements of D_v in coefficient form, radial functions in L^2_{V^_2}, the
// orthonormal bases used for matrix assembly, and the embedding checks.
//
// Normalization: ||f||^2_{D_v} = |f^(0)|^2 + 2 sum_{k>=1} k^2 |f^(k)|^2 v_{2k-1}.

#include "hgs/quadrature.hpp"
#include "hgs/symbols.hpp"
#include "hgs/weights.hpp"

#include <complex>
#include <functional>
#include <string>
#include <vector>

namespace hgs {

struct CoefficientFunction {
  std::vector<double> c;  // Maclaurin coefficients f^(0), f^(1), ...
  std::string label;

  std::int64_t degree() const;
  double operator()(double x) const;
  std::complex<double> operator()(std::complex<double> z) const;
  static CoefficientFunction monomial(int n);
};

/// Function on (0,1) evaluated as eval(s, u) with u = 1 - s supplied at full precision.
struct RadialFunction {
  std::function<double(double, double)> eval;
  double support_lo = 0.0;  // the function vanishes on [0, support_lo)
  std::string label;

  double operator()(double s) const { return s < support_lo ? 0.0 : eval(s, 1.0 - s); }
  double from_one(double u) const { return 1.0 - u < support_lo ? 0.0 : eval(1.0 - u, u); }
};

double dv_inner(const RadialWeight& w, const CoefficientFunction& f, const CoefficientFunction& h);
double dv_norm(const RadialWeight& w, const CoefficientFunction& f);

struct NormVerdict {
  quad::Verdict verdict = quad::Verdict::indeterminate;
  double value = 0.0;
  quad::DivergenceVerdict probe;

  bool finite() const noexcept { return verdict == quad::Verdict::finite; }
};

/// (int_0^1 |phi|^2 V^_2)^(1/2); a diverging integrand yields an infinite verdict.
NormVerdict l2v2_norm(const RadialWeight& w, const RadialFunction& phi);

enum class BasisKind { monomial, block, sigma };

/// Unit vector of D_v. The block and sigma kinds live on {k : k+1 in I(n)}.
/// sigma requires the symbol; an all-zero block raises Error(input).
CoefficientFunction basis_element(const RadialWeight& w, BasisKind kind, int n, const Symbol* g = nullptr);

/// max_t |f(s e^{it})| by circle sampling, doubling the sample count until the
/// estimate changes by less than 1e-6 relative.
double max_modulus(const CoefficientFunction& f, double s, int samples);

struct HardyLittlewood {
  double fejer_ratio = 0.0;  // int_0^1 |f| / ||f||_{D_v}
  double hl_ratio = 0.0;     // int_0^1 M_inf(s,f)^2 V^_2(s) ds / ||f||^2_{D_v}
  double dv_norm = 0.0;
};

/// Ratio of the radial integral to the D_v norm without checking any hypothesis.
double fejer_ratio(const RadialWeight& w, const CoefficientFunction& f);
/// Same, with the radial integral taken from an evaluator of the same function.
double fejer_ratio(const RadialWeight& w, const RadialFunction& radial, const CoefficientFunction& f);

/// Requires finite vg2 and M1 verdicts; `report` may carry a precomputed condition report for w.
HardyLittlewood hl_checks(const RadialWeight& w, const CoefficientFunction& f, int circle_samples,
                          const ConditionReport* report = nullptr);

/// ||f||^2_{A^2_w} = sum_k |f^(k)|^2 2 w_{2k+1}.
double a2_norm_squared(const RadialWeight& omega, const CoefficientFunction& f);

struct BergmanLift {
  RadialWeight v;
  ConditionValue m2cond;
  std::vector<std::pair<std::string, double>> samples;  // (label, ||f||^2_{A^2_w} / ||f||^2_{D_v})
};

/// Fixed corpus of twenty polynomials used for the norm-equivalence samples.
std::vector<CoefficientFunction> polynomial_corpus();

BergmanLift bergman_lift(const RadialWeight& omega, int depth = 24);

} // namespace hgs
