// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace ddfr {

namespace detail {

NormalizedOperator::NormalizedOperator(const DictionaryOperator& base)
    : base_(base), inv_norms_(base.column_norms()) {
  for (Index q = 0; q < inv_norms_.size(); ++q) {
    inv_norms_(q) = inv_norms_(q) > 0.0 ? 1.0 / inv_norms_(q) : 0.0;
  }
}

ComplexVector NormalizedOperator::apply(const ComplexVector& x) const {
  return base_.apply(x.cwiseProduct(inv_norms_.cast<Complex>()));
}

ComplexVector NormalizedOperator::adjoint(const ComplexVector& y) const {
  return base_.adjoint(y).cwiseProduct(inv_norms_.cast<Complex>());
}

RealVector NormalizedOperator::column_norms() const {
  RealVector n(cols());
  for (Index q = 0; q < n.size(); ++q) n(q) = inv_norms_(q) > 0.0 ? 1.0 : 0.0;
  return n;
}

SubsetFit fit_columns(const DictionaryOperator& op, const std::vector<Index>& idx,
                      const ComplexVector& y) {
  SubsetFit fit;
  if (idx.empty()) {
    fit.residual = y;
    return fit;
  }
  const ComplexMatrix a = op.columns(idx);
  Eigen::CompleteOrthogonalDecomposition<ComplexMatrix> cod(a);
  fit.rank_deficient = cod.rank() < static_cast<Index>(idx.size());
  fit.coefficients = cod.solve(y);
  fit.residual = y - a * fit.coefficients;
  return fit;
}

}  // namespace detail

void finalize_result(SolverResult& result, const DictionaryOperator& dict, const ComplexVector& y) {
  result.support.clear();
  for (Index q = 0; q < result.coefficients.size(); ++q) {
    if (result.coefficients(q) != Complex{}) result.support.push_back(q);
  }
  result.residual_norm = (y - dict.apply(result.coefficients)).norm();
}

double default_epsilon(double sigma, Index n) {
  const double nn = static_cast<double>(n);
  return sigma * std::sqrt(nn + 2.0 * std::sqrt(2.0 * nn));
}

TsvdSolver::TsvdSolver(const ComplexMatrix& dict) : dict_(dict) {
  Eigen::BDCSVD<ComplexMatrix> svd(dict_, Eigen::ComputeThinU | Eigen::ComputeThinV);
  u_ = svd.matrixU();
  v_ = svd.matrixV();
  sigma_ = svd.singularValues();
}

TsvdSolver::TsvdSolver(const DictionaryOperator& dict) : TsvdSolver(dict.dense()) {}

Index TsvdSolver::kept_rank(const Truncation& truncation) const {
  if (const auto* r = std::get_if<TruncationRank>(&truncation)) {
    if (r->rank < 0 || r->rank > sigma_.size()) {
      throw ParameterError("tsvd: truncation rank exceeds the smaller matrix dimension");
    }
    return r->rank;
  }
  const double thr = std::get<RelativeThreshold>(truncation).threshold;
  if (!(thr >= 0.0)) throw ParameterError("tsvd: threshold must be nonnegative");
  if (sigma_.size() == 0 || sigma_(0) == 0.0) return 0;
  Index t = 0;
  while (t < sigma_.size() && sigma_(t) > thr * sigma_(0)) ++t;
  return t;
}

SolverResult TsvdSolver::solve(const ComplexVector& y, const Truncation& truncation) const {
  if (y.size() != dict_.rows()) throw ParameterError("tsvd: measurement length mismatch");
  const Index t = kept_rank(truncation);
  SolverResult out;
  out.solver = "tsvd";
  const ComplexVector proj = u_.leftCols(t).adjoint() * y;
  const ComplexVector scaled = proj.cwiseQuotient(sigma_.head(t).cast<Complex>());
  out.coefficients = v_.leftCols(t) * scaled;
  out.iterations = 1;
  out.converged = true;
  out.support.clear();
  for (Index q = 0; q < out.coefficients.size(); ++q) {
    if (out.coefficients(q) != Complex{}) out.support.push_back(q);
  }
  out.residual_norm = (y - dict_ * out.coefficients).norm();
  return out;
}

SolverResult tsvd_solve(const ComplexMatrix& dict, const ComplexVector& y, const Truncation& truncation) {
  return TsvdSolver(dict).solve(y, truncation);
}

SolverResult correlator_solve(const DictionaryOperator& dict, const ComplexVector& y) {
  if (y.size() != dict.rows()) throw ParameterError("correlator: measurement length mismatch");
  SolverResult out;
  out.solver = "correlator";
  out.coefficients = dict.adjoint(y);
  out.iterations = 1;
  out.converged = true;
  finalize_result(out, dict, y);
  return out;
}

SolverResult correlator_solve(const ComplexMatrix& dict, const ComplexVector& y) {
  return correlator_solve(DenseOperator(dict), y);
}

}  // namespace ddfr
