// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "ddfr/operator.hpp"
#include "ddfr/solvers.hpp"

namespace ddfr::detail {

/// A = G diag(1/|g_q|): unit-norm atoms. Zero columns stay zero.
class NormalizedOperator final : public DictionaryOperator {
 public:
  explicit NormalizedOperator(const DictionaryOperator& base);

  Index rows() const override { return base_.rows(); }
  Index cols() const override { return base_.cols(); }
  ComplexVector apply(const ComplexVector& x) const override;
  ComplexVector adjoint(const ComplexVector& y) const override;
  ComplexVector column(Index q) const override { return base_.column(q) * inv_norms_(q); }
  RealVector column_norms() const override;

  /// Coefficients of the unit-norm problem mapped back to the original atoms.
  ComplexVector to_original(const ComplexVector& x) const { return x.cwiseProduct(inv_norms_.cast<Complex>()); }
  const RealVector& inv_norms() const { return inv_norms_; }

 private:
  const DictionaryOperator& base_;
  RealVector inv_norms_;
};

/// Least squares on the given columns; pseudo-inverse when rank deficient.
struct SubsetFit {
  ComplexVector coefficients;
  ComplexVector residual;
  bool rank_deficient = false;
};
SubsetFit fit_columns(const DictionaryOperator& op, const std::vector<Index>& idx, const ComplexVector& y);

struct ProxGradResult {
  ComplexVector x;
  int iterations = 0;
  bool converged = false;
};

/// Accelerated proximal gradient on 1/2|A x - y|^2 + penalty(x) with step 1/lipschitz.
/// Momentum is reset whenever the objective increases; stops when the relative
/// objective change drops below `tol`.
template <class Prox, class Penalty>
ProxGradResult accelerated_prox_grad(const DictionaryOperator& a, const ComplexVector& y,
                                     ComplexVector x0, double lipschitz, Prox&& prox,
                                     Penalty&& penalty, int max_iterations, double tol) {
  ProxGradResult out;
  ComplexVector x = std::move(x0);
  ComplexVector ax = a.apply(x);
  ComplexVector z = x;
  ComplexVector az = ax;
  double t = 1.0;
  bool fresh = true;  // z == x, so the next step is plain proximal gradient
  double f = 0.5 * (ax - y).squaredNorm() + penalty(x);
  const double step = 1.0 / lipschitz;

  while (out.iterations < max_iterations) {
    ++out.iterations;
    const ComplexVector grad = a.adjoint(az - y);
    ComplexVector xn = prox(ComplexVector(z - step * grad), step);
    ComplexVector axn = a.apply(xn);
    const double fn = 0.5 * (axn - y).squaredNorm() + penalty(xn);
    if (fn > f && !fresh) {
      t = 1.0;
      z = x;
      az = ax;
      fresh = true;
      continue;
    }
    const double tn = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
    const double beta = (t - 1.0) / tn;
    z = xn + beta * (xn - x);
    az = axn + beta * (axn - ax);
    const double rel = std::abs(f - fn) / std::max(std::abs(fn), 1e-300);
    x = std::move(xn);
    ax = std::move(axn);
    f = fn;
    t = tn;
    fresh = false;
    if (rel < tol) {
      out.converged = true;
      break;
    }
  }
  out.x = std::move(x);
  return out;
}

}  // namespace ddfr::detail
