// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace ddfr {

void GroupPartition::validate(Index cols, bool require_cover) const {
  if (labels.size() != groups.size()) throw ParameterError("group partition: one label per group required");
  std::vector<char> used(static_cast<std::size_t>(cols), 0);
  for (const auto& [b, e] : groups) {
    if (b < 0 || e > cols || b >= e) throw ParameterError("group partition: empty or out-of-range group");
    for (Index q = b; q < e; ++q) {
      if (used[static_cast<std::size_t>(q)]) throw ParameterError("group partition: overlapping groups");
      used[static_cast<std::size_t>(q)] = 1;
    }
  }
  if (require_cover && std::find(used.begin(), used.end(), 0) != used.end()) {
    throw ParameterError("group partition: groups must cover every column");
  }
}

GroupPartition GroupPartition::by_doa(const GDictionary& dict) {
  GroupPartition p;
  const auto& doa = dict.doa_labels();
  Index begin = 0;
  for (Index q = 1; q <= dict.cols(); ++q) {
    if (q == dict.cols() || doa[static_cast<std::size_t>(q)] != doa[static_cast<std::size_t>(begin)]) {
      p.groups.emplace_back(begin, q);
      p.labels.push_back(doa[static_cast<std::size_t>(begin)]);
      begin = q;
    }
  }
  return p;
}

SolverResult group_lasso(const DictionaryOperator& dict, const ComplexVector& y,
                         const GroupPartition& partition, double lambda,
                         const GroupLassoOptions& opts) {
  if (!(lambda > 0.0)) throw ParameterError("group_lasso: lambda must be positive");
  if (y.size() != dict.rows()) throw ParameterError("group_lasso: measurement length mismatch");
  partition.validate(dict.cols(), true);

  SolverResult out;
  out.solver = "group_lasso";
  out.lambda = lambda;

  // Penalty in the original atom scaling, so the reported optimality
  // conditions refer to the dictionary as given.
  auto prox = [&](const ComplexVector& v, double step) {
    ComplexVector x = ComplexVector::Zero(v.size());
    const double tau = lambda * step;
    for (const auto& [b, e] : partition.groups) {
      const double n = v.segment(b, e - b).norm();
      if (n > tau) x.segment(b, e - b) = v.segment(b, e - b) * ((n - tau) / n);
    }
    return x;
  };
  auto penalty = [&](const ComplexVector& x) {
    double s = 0.0;
    for (const auto& [b, e] : partition.groups) s += x.segment(b, e - b).norm();
    return lambda * s;
  };

  const double lipschitz = 1.01 * operator_norm_squared(dict);
  auto r = detail::accelerated_prox_grad(dict, y, ComplexVector::Zero(dict.cols()), lipschitz, prox,
                                         penalty, opts.max_iterations, opts.tolerance);
  out.coefficients = std::move(r.x);
  out.iterations = r.iterations;
  out.converged = r.converged;
  finalize_result(out, dict, y);
  return out;
}

SolverResult group_lasso(const ComplexMatrix& dict, const ComplexVector& y,
                         const GroupPartition& partition, double lambda,
                         const GroupLassoOptions& opts) {
  return group_lasso(DenseOperator(dict), y, partition, lambda, opts);
}

SolverResult group_gp(const DictionaryOperator& dict, const ComplexVector& y,
                      const GroupPartition& partition, Index max_groups, double residual_tol) {
  if (y.size() != dict.rows()) throw ParameterError("group_gp: measurement length mismatch");
  partition.validate(dict.cols(), false);
  if (max_groups < 0 || max_groups > partition.num_groups()) {
    throw ParameterError("group_gp: max_groups exceeds the number of groups");
  }
  const detail::NormalizedOperator a(dict);

  SolverResult out;
  out.solver = "group_gp";
  out.coefficients = ComplexVector::Zero(dict.cols());

  std::vector<char> chosen(static_cast<std::size_t>(partition.num_groups()), 0);
  std::vector<Index> columns;
  ComplexVector residual = y;
  ComplexVector fitted;
  Index selected = 0;
  const Index cap = std::min(max_groups, partition.num_groups());

  while (residual.norm() > residual_tol && selected < cap) {
    const ComplexVector corr = a.adjoint(residual);
    Index best = -1;
    double best_score = 0.0;
    for (Index g = 0; g < partition.num_groups(); ++g) {
      if (chosen[static_cast<std::size_t>(g)]) continue;
      const auto [b, e] = partition.groups[static_cast<std::size_t>(g)];
      const double score = corr.segment(b, e - b).norm();
      if (score > best_score) {
        best_score = score;
        best = g;
      }
    }
    if (best < 0 || best_score <= 1e-13 * y.norm()) break;

    chosen[static_cast<std::size_t>(best)] = 1;
    ++selected;
    const auto [b, e] = partition.groups[static_cast<std::size_t>(best)];
    for (Index q = b; q < e; ++q) columns.push_back(q);
    auto fit = detail::fit_columns(dict, columns, y);
    out.rank_deficient = out.rank_deficient || fit.rank_deficient;
    fitted = std::move(fit.coefficients);
    residual = std::move(fit.residual);
    ++out.iterations;
  }

  for (std::size_t k = 0; k < columns.size(); ++k) {
    out.coefficients(columns[k]) = fitted(static_cast<Index>(k));
  }
  finalize_result(out, dict, y);
  out.converged = out.residual_norm <= residual_tol || selected == max_groups;
  return out;
}

SolverResult group_gp(const ComplexMatrix& dict, const ComplexVector& y,
                      const GroupPartition& partition, Index max_groups, double residual_tol) {
  return group_gp(DenseOperator(dict), y, partition, max_groups, residual_tol);
}

}  // namespace ddfr
