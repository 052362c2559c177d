// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <cmath>

#include "detail.hpp"

namespace ddfr {

namespace {

ComplexVector soft_threshold(const ComplexVector& v, double tau) {
  ComplexVector out(v.size());
  for (Index q = 0; q < v.size(); ++q) {
    const double mag = std::abs(v(q));
    out(q) = mag > tau ? v(q) * ((mag - tau) / mag) : Complex{};
  }
  return out;
}

struct PenalizedSolve {
  ComplexVector x;
  double residual = 0.0;
  bool converged = false;
};

}  // namespace

SolverResult bpdn_l1(const DictionaryOperator& dict, const ComplexVector& y, double epsilon,
                     const BpdnOptions& opts) {
  if (y.size() != dict.rows()) throw ParameterError("bpdn_l1: measurement length mismatch");
  if (!(epsilon >= 0.0)) throw ParameterError("bpdn_l1: epsilon must be nonnegative");

  SolverResult out;
  out.solver = "bpdn_l1";
  out.coefficients = ComplexVector::Zero(dict.cols());
  if (epsilon >= y.norm()) {
    out.converged = true;
    finalize_result(out, dict, y);
    return out;
  }

  const detail::NormalizedOperator a(dict);
  const double lipschitz = 1.01 * operator_norm_squared(a);
  const double lambda_max = a.adjoint(y).cwiseAbs().maxCoeff();

  auto solve = [&](double lambda, ComplexVector warm) {
    auto prox = [lambda](const ComplexVector& v, double step) { return soft_threshold(v, lambda * step); };
    auto penalty = [lambda](const ComplexVector& x) { return lambda * x.cwiseAbs().sum(); };
    auto r = detail::accelerated_prox_grad(a, y, std::move(warm), lipschitz, prox, penalty,
                                           opts.max_iterations, opts.tolerance);
    out.iterations += r.iterations;
    PenalizedSolve s;
    s.residual = (y - a.apply(r.x)).norm();
    s.x = std::move(r.x);
    s.converged = r.converged;
    return s;
  };

  // Halve lambda from lambda_max / 2 until the residual constraint holds.
  double hi = lambda_max;  // z = 0 here, residual |y| > epsilon
  double lo = 0.5 * lambda_max;
  PenalizedSolve feasible = solve(lo, ComplexVector::Zero(dict.cols()));
  int halvings = 0;
  while (feasible.residual > epsilon) {
    if (++halvings > opts.max_halvings) {
      out.coefficients = a.to_original(feasible.x);
      out.lambda = lo;
      out.converged = false;
      finalize_result(out, dict, y);
      return out;
    }
    hi = lo;
    lo *= 0.5;
    feasible = solve(lo, std::move(feasible.x));
  }

  // Bisect towards the largest feasible lambda: the constrained optimum sits
  // where the residual reaches epsilon.
  for (int b = 0; b < opts.bisection_steps; ++b) {
    const double mid = 0.5 * (lo + hi);
    PenalizedSolve trial = solve(mid, feasible.x);
    if (trial.residual <= epsilon) {
      lo = mid;
      feasible = std::move(trial);
    } else {
      hi = mid;
    }
  }

  out.coefficients = a.to_original(feasible.x);
  out.lambda = lo;
  finalize_result(out, dict, y);
  out.converged = feasible.converged && out.residual_norm <= epsilon * (1.0 + 1e-3);
  return out;
}

SolverResult bpdn_l1(const ComplexMatrix& dict, const ComplexVector& y, double epsilon,
                     const BpdnOptions& opts) {
  return bpdn_l1(DenseOperator(dict), y, epsilon, opts);
}

}  // namespace ddfr
