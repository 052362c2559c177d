// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace ddfr {

SolverResult omp(const DictionaryOperator& dict, const ComplexVector& y, Index max_atoms,
                 double residual_tol) {
  if (y.size() != dict.rows()) throw ParameterError("omp: measurement length mismatch");
  if (max_atoms < 0 || max_atoms > dict.cols()) {
    throw ParameterError("omp: max_atoms exceeds the number of columns");
  }
  const RealVector norms = dict.column_norms();
  const Index cap = std::min({max_atoms, dict.cols(), dict.rows()});

  SolverResult out;
  out.solver = "omp";
  out.coefficients = ComplexVector::Zero(dict.cols());

  std::vector<Index> support;
  std::vector<char> selected(static_cast<std::size_t>(dict.cols()), 0);
  ComplexVector residual = y;
  ComplexVector fitted;

  while (residual.norm() > residual_tol && static_cast<Index>(support.size()) < cap) {
    const ComplexVector corr = dict.adjoint(residual);
    Index best = -1;
    double best_score = 0.0;
    for (Index q = 0; q < corr.size(); ++q) {
      if (selected[static_cast<std::size_t>(q)] || norms(q) == 0.0) continue;
      const double score = std::abs(corr(q)) / norms(q);
      if (score > best_score) {  // strict: ties keep the lowest index
        best_score = score;
        best = q;
      }
    }
    // residual orthogonal (to rounding) to every remaining atom
    if (best < 0 || best_score <= 1e-13 * y.norm()) break;

    support.push_back(best);
    selected[static_cast<std::size_t>(best)] = 1;
    auto fit = detail::fit_columns(dict, support, y);
    out.rank_deficient = out.rank_deficient || fit.rank_deficient;
    fitted = std::move(fit.coefficients);
    residual = std::move(fit.residual);
    ++out.iterations;
  }

  for (std::size_t k = 0; k < support.size(); ++k) {
    out.coefficients(support[k]) = fitted(static_cast<Index>(k));
  }
  finalize_result(out, dict, y);
  out.converged = out.residual_norm <= residual_tol || static_cast<Index>(support.size()) == max_atoms;
  return out;
}

SolverResult omp(const ComplexMatrix& dict, const ComplexVector& y, Index max_atoms,
                 double residual_tol) {
  return omp(DenseOperator(dict), y, max_atoms, residual_tol);
}

}  // namespace ddfr
