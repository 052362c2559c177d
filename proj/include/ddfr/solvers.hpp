// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ddfr/dictionary.hpp"
#include "ddfr/operator.hpp"
#include "ddfr/types.hpp"

namespace ddfr {

/// Solution of y = G z in the dictionary's own atom scaling.
struct SolverResult {
  std::string solver;
  ComplexVector coefficients;
  double residual_norm = 0.0;   // |y - G z|_2
  std::vector<Index> support;   // {q : coefficients[q] != 0}, ascending
  int iterations = 0;
  bool converged = false;
  bool rank_deficient = false;  // greedy refits solved by pseudo-inverse
  double lambda = 0.0;          // final penalty of the proximal solvers
};

/// Disjoint column ranges [begin, end), one DOA label per group.
struct GroupPartition {
  std::vector<std::pair<Index, Index>> groups;
  std::vector<double> labels;

  Index num_groups() const { return static_cast<Index>(groups.size()); }

  /// Throws unless groups are nonempty, disjoint and inside [0, cols);
  /// with `require_cover` they must also cover every column.
  void validate(Index cols, bool require_cover) const;

  /// Maximal runs of equal DOA label. Direct-synthesis dictionaries are
  /// theta-major, so each DOA becomes exactly one contiguous group.
  static GroupPartition by_doa(const GDictionary& dict);
};

/// Orthogonal matching pursuit with least-squares refits; ties go to the lowest index.
SolverResult omp(const DictionaryOperator& dict, const ComplexVector& y, Index max_atoms,
                 double residual_tol);
SolverResult omp(const ComplexMatrix& dict, const ComplexVector& y, Index max_atoms,
                 double residual_tol);

struct BpdnOptions {
  int max_iterations = 2000;  // per penalized subproblem
  double tolerance = 1e-8;    // relative objective change
  int bisection_steps = 10;
  int max_halvings = 60;
};

/// min |z|_1 s.t. |y - G z|_2 <= epsilon, through a continuation over the
/// penalized form min 1/2|y - G z|^2 + lambda |z|_1 solved by accelerated
/// proximal gradient on unit-norm atoms.
SolverResult bpdn_l1(const DictionaryOperator& dict, const ComplexVector& y, double epsilon,
                     const BpdnOptions& opts = {});
SolverResult bpdn_l1(const ComplexMatrix& dict, const ComplexVector& y, double epsilon,
                     const BpdnOptions& opts = {});

/// sigma sqrt(n + 2 sqrt(2 n)): a high quantile of the norm of n-dimensional
/// noise with per-entry standard deviation sigma.
double default_epsilon(double sigma, Index n);

struct TruncationRank {
  Index rank = 0;
};
struct RelativeThreshold {
  double threshold = 0.0;  // keep sigma_i > threshold * sigma_1
};
using Truncation = std::variant<TruncationRank, RelativeThreshold>;

/// Truncated-SVD pseudo-inverse V_T diag(1/sigma) U_T^H. The decomposition is
/// computed once and reused for every right-hand side.
class TsvdSolver {
 public:
  explicit TsvdSolver(const ComplexMatrix& dict);
  explicit TsvdSolver(const DictionaryOperator& dict);

  SolverResult solve(const ComplexVector& y, const Truncation& truncation) const;
  const RealVector& singular_values() const { return sigma_; }
  Index kept_rank(const Truncation& truncation) const;

 private:
  ComplexMatrix dict_;
  ComplexMatrix u_;
  ComplexMatrix v_;
  RealVector sigma_;
};

SolverResult tsvd_solve(const ComplexMatrix& dict, const ComplexVector& y,
                        const Truncation& truncation);

/// z = G^H y.
SolverResult correlator_solve(const DictionaryOperator& dict, const ComplexVector& y);
SolverResult correlator_solve(const ComplexMatrix& dict, const ComplexVector& y);

struct GroupLassoOptions {
  int max_iterations = 2000;
  double tolerance = 1e-8;  // relative objective change
};

/// min 1/2 |y - G z|^2 + lambda sum_i |z_{G_i}|_2 by accelerated block proximal gradient.
SolverResult group_lasso(const DictionaryOperator& dict, const ComplexVector& y,
                         const GroupPartition& partition, double lambda,
                         const GroupLassoOptions& opts = {});
SolverResult group_lasso(const ComplexMatrix& dict, const ComplexVector& y,
                         const GroupPartition& partition, double lambda,
                         const GroupLassoOptions& opts = {});

/// Greedy group selection by normalized group correlation, least-squares refit
/// over all selected groups.
SolverResult group_gp(const DictionaryOperator& dict, const ComplexVector& y,
                      const GroupPartition& partition, Index max_groups, double residual_tol);
SolverResult group_gp(const ComplexMatrix& dict, const ComplexVector& y,
                      const GroupPartition& partition, Index max_groups, double residual_tol);

/// Fills support and residual_norm from coefficients.
void finalize_result(SolverResult& result, const DictionaryOperator& dict, const ComplexVector& y);

nlohmann::json result_to_json(const SolverResult& result);
SolverResult result_from_json(const nlohmann::json& doc);

}  // namespace ddfr
