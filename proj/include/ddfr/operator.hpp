// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <vector>

#include "ddfr/dictionary.hpp"
#include "ddfr/types.hpp"

namespace ddfr {

/// A dictionary seen as a linear map C^Q -> C^R. Solvers only need products,
/// adjoint products and individual columns.
class DictionaryOperator {
 public:
  virtual ~DictionaryOperator() = default;

  virtual Index rows() const = 0;
  virtual Index cols() const = 0;
  virtual ComplexVector apply(const ComplexVector& z) const = 0;
  virtual ComplexVector adjoint(const ComplexVector& y) const = 0;
  virtual ComplexVector column(Index q) const = 0;

  /// Euclidean norm of every column.
  virtual RealVector column_norms() const;

  /// Columns gathered into a dense rows() x idx.size() block.
  ComplexMatrix columns(const std::vector<Index>& idx) const;

  /// Dense copy of the whole operator.
  virtual ComplexMatrix dense() const;
};

class DenseOperator final : public DictionaryOperator {
 public:
  explicit DenseOperator(ComplexMatrix matrix) : a_(std::move(matrix)) {}

  Index rows() const override { return a_.rows(); }
  Index cols() const override { return a_.cols(); }
  ComplexVector apply(const ComplexVector& z) const override;
  ComplexVector adjoint(const ComplexVector& y) const override;
  ComplexVector column(Index q) const override { return a_.col(q); }
  RealVector column_norms() const override { return a_.colwise().norm().transpose(); }
  ComplexMatrix dense() const override { return a_; }

  const ComplexMatrix& matrix() const { return a_; }

 private:
  ComplexMatrix a_;
};

/// G applied through its Kronecker factors: every column is v(delta_q) (x) d(f_q), so
///   G z     = vec(D W),  W(f, :) = sum over columns q at f of z_q v(delta_q)^T
///   G^H y   : X = D^H Y, (G^H y)_q = v(delta_q)^H X(f_q, :)^T
/// at O(Q N_S + M N_F N_S) per product instead of O(M N_S Q).
class FactoredOperator final : public DictionaryOperator {
 public:
  explicit FactoredOperator(const GDictionary& dict);

  Index rows() const override { return m_ * ns_; }
  Index cols() const override { return steering_.cols(); }
  ComplexVector apply(const ComplexVector& z) const override;
  ComplexVector adjoint(const ComplexVector& y) const override;
  ComplexVector column(Index q) const override;
  RealVector column_norms() const override;

 private:
  Index m_;
  Index ns_;
  ComplexMatrix fourier_;    // M x N_F over distinct frequencies
  ComplexMatrix steering_;   // N_S x Q, column q = v(delta_q)
  std::vector<Index> freq_index_;
};

/// Largest squared singular value of the operator, by power iteration on A^H A.
double operator_norm_squared(const DictionaryOperator& op, int max_iterations = 500,
                             double rel_tol = 1e-9);

}  // namespace ddfr
