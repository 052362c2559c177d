// SPDX-License-Identifier: Apache-2.0
#include "ddfr/operator.hpp"

#include <cmath>

namespace ddfr {

RealVector DictionaryOperator::column_norms() const {
  RealVector n(cols());
  for (Index q = 0; q < cols(); ++q) n(q) = column(q).norm();
  return n;
}

ComplexMatrix DictionaryOperator::columns(const std::vector<Index>& idx) const {
  ComplexMatrix out(rows(), static_cast<Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Index>(k)) = column(idx[k]);
  return out;
}

ComplexMatrix DictionaryOperator::dense() const {
  ComplexMatrix out(rows(), cols());
  for (Index q = 0; q < cols(); ++q) out.col(q) = column(q);
  return out;
}

ComplexVector DenseOperator::apply(const ComplexVector& z) const {
  if (z.size() != a_.cols()) throw ParameterError("DenseOperator::apply: size mismatch");
  return a_ * z;
}

ComplexVector DenseOperator::adjoint(const ComplexVector& y) const {
  if (y.size() != a_.rows()) throw ParameterError("DenseOperator::adjoint: size mismatch");
  return a_.adjoint() * y;
}

FactoredOperator::FactoredOperator(const GDictionary& dict)
    : m_(dict.grid().num_snapshots),
      ns_(dict.geometry().num_sensors()),
      fourier_(fourier_dictionary(dict.grid(), dict.distinct_freqs())),
      steering_(delta_steering_matrix(dict.geometry(), dict.delta_labels())),
      freq_index_(dict.freq_index()) {}

ComplexVector FactoredOperator::apply(const ComplexVector& z) const {
  if (z.size() != cols()) throw ParameterError("FactoredOperator::apply: size mismatch");
  ComplexMatrix w = ComplexMatrix::Zero(fourier_.cols(), ns_);
  for (Index q = 0; q < cols(); ++q) {
    const Complex zq = z(q);
    if (zq == Complex{}) continue;
    w.row(freq_index_[static_cast<std::size_t>(q)]) += zq * steering_.col(q).transpose();
  }
  const ComplexMatrix y = fourier_ * w;
  return Eigen::Map<const ComplexVector>(y.data(), y.size());
}

ComplexVector FactoredOperator::adjoint(const ComplexVector& y) const {
  if (y.size() != rows()) throw ParameterError("FactoredOperator::adjoint: size mismatch");
  const Eigen::Map<const ComplexMatrix> ymat(y.data(), m_, ns_);
  const ComplexMatrix x = fourier_.adjoint() * ymat;  // N_F x N_S
  ComplexVector z(cols());
  for (Index q = 0; q < cols(); ++q) {
    z(q) = steering_.col(q).dot(x.row(freq_index_[static_cast<std::size_t>(q)]).transpose());
  }
  return z;
}

ComplexVector FactoredOperator::column(Index q) const {
  if (q < 0 || q >= cols()) throw ParameterError("FactoredOperator::column: index out of range");
  return kronecker_column(steering_.col(q), fourier_.col(freq_index_[static_cast<std::size_t>(q)]));
}

RealVector FactoredOperator::column_norms() const {
  // |v (x) d| = |v| |d|
  const RealVector dn = fourier_.colwise().norm().transpose();
  RealVector n(cols());
  for (Index q = 0; q < cols(); ++q) {
    n(q) = steering_.col(q).norm() * dn(freq_index_[static_cast<std::size_t>(q)]);
  }
  return n;
}

double operator_norm_squared(const DictionaryOperator& op, int max_iterations, double rel_tol) {
  // deterministic start vector with no special alignment
  ComplexVector x(op.cols());
  for (Index q = 0; q < x.size(); ++q) {
    x(q) = unit_phasor(0.7 * static_cast<double>(q) + 0.1 * static_cast<double>(q * q % 17));
  }
  x.normalize();
  double lambda = 0.0;
  for (int it = 0; it < max_iterations; ++it) {
    ComplexVector next = op.adjoint(op.apply(x));
    const double nrm = next.norm();
    if (nrm == 0.0) return 0.0;
    next /= nrm;
    const bool done = std::abs(nrm - lambda) <= rel_tol * nrm;
    lambda = nrm;
    x = std::move(next);
    if (done) break;
  }
  return lambda;
}

}  // namespace ddfr
