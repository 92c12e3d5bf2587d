#pragma once

// Truncated matrices of H_g and of the Hilbert operator H, coefficient
// actions, and the extremal inputs used for operator-norm lower bounds.

#include "hgs/spaces.hpp"
#include "hgs/symbols.hpp"
#include "hgs/weights.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace hgs {

enum class HypothesisPolicy { enforce, stamp };

struct OperatorMatrix {
  Eigen::MatrixXd entries;  // rows: output index j, columns: input index n
  std::string weight_id;
  std::string symbol_id;
  std::string basis;        // "monomial", "block" or "cells"
  int N = 0;
  double frobenius_sq = 0.0;
  double row_tail_mass = 0.0;  // estimated share of ||.||_F^2 carried by rows j >= rows()
  std::string stamp;           // empty, or the failed hypotheses

  bool outside_hypotheses() const noexcept { return !stamp.empty(); }
};

/// Largest matrix dimension accepted before a resource error.
inline constexpr long kMaxMatrixEntries = 1L << 27;

/// int_0^1 t^j f(t) dt = sum_k f^(k) / (k + j + 1).
double moment_of(const CoefficientFunction& f, int j);
/// Quadrature for radial functions; a divergent integrand gives an infinite verdict.
quad::DivergenceVerdict moment_of(const RadialFunction& f, int j);

/// Coefficients j = 0..J of H_g(f): (j+1) g^(j+1) int_0^1 t^j f(t) dt.
CoefficientFunction hg_apply(const RadialWeight& w, const Symbol& g, const CoefficientFunction& f, int J);

/// Matrix of H_g against the orthonormal monomial output basis. Columns are the
/// monomial basis e_0..e_{N-1}, or the block basis elements contained in [0, N).
OperatorMatrix hg_matrix(const RadialWeight& w, const Symbol& g, int N, BasisKind basis = BasisKind::monomial,
                         HypothesisPolicy policy = HypothesisPolicy::enforce, const ConditionReport* report = nullptr);

/// ||H_g(e_n)||^2_{D_v} from the closed series in n, summed over output indices j < J
/// (J < 0: the full series with a dyadic tail estimate).
double hs_column_series(const RadialWeight& w, const Symbol& g, int n, long J = -1);

/// H on L^2_{V^_2} discretized by normalized indicators of the cells [1-2^-i, 1-2^-(i+1)), i < D,
/// against the first J orthonormal monomials.
OperatorMatrix hilbert_discretized(const RadialWeight& w, int D, int J,
                                   HypothesisPolicy policy = HypothesisPolicy::enforce,
                                   const ConditionReport* report = nullptr);

struct Extremal {
  RadialFunction radial;
  CoefficientFunction coefficients;  // fN only
  double l2v2_norm = 0.0;            // phi_r only
  double lambda = 0.0;               // fN only
};

/// f_N(z) = (1-a_N)^(lambda/2) v^(a_N)^(-1/2) (1 - a_N z)^((1-lambda)/2), a_N = 1 - 2^-N.
/// lambda <= 0 selects 2 beta + 4 with beta the tail-decay estimate; lambda must exceed 1.
Extremal extremal_fN(const RadialWeight& w, int N, double lambda = 0.0);
/// phi_r = chi_[r,1) / V^_2.
Extremal extremal_phi(const RadialWeight& w, double r);

struct PhiProbe {
  double r = 0.0;
  double phi_norm = 0.0;  // ||phi_r||_{L^2_{V^_2}}
  double dv_norm = 0.0;   // ||H(phi_r)||_{D_v}
  double l2_norm = 0.0;   // ||H(phi_r)||_{L^2_{V^_2}}
  double l2_head = 0.0;   // (int_0^r V^_2 |H(phi_r)|^2)^(1/2)
  double lower = 0.0;     // (1/2) (int_0^r V^_4)^(1/2) int_r^1 1/V^_2
  double ratio = 0.0;     // dv_norm / phi_norm, a lower bound for ||H||
  bool converged = true;
};

PhiProbe phi_probe(const RadialWeight& w, double r);

} // namespace hgs
