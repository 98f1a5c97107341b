#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "cibeam/errors.hpp"
#include "cibeam/tolerances.hpp"

namespace cibeam {

using Complex = std::complex<double>;
using RealVector = std::vector<double>;
using ComplexVector = std::vector<Complex>;

/// Dense row-major matrix, sized for small per-symbol problems (n <= ~64).
template <typename T>
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T{}) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::vector<T>& data() { return data_; }
  const std::vector<T>& data() const { return data_; }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using ComplexMatrix = DenseMatrix<Complex>;
using RealMatrix = DenseMatrix<double>;

/// Lower-triangular factorization A = L L^H of a Hermitian (or symmetric)
/// positive-definite matrix. Throws NotPositiveDefinite when a pivot falls
/// at or below kPivotEps * trace(A)/n.
template <typename T>
class CholeskyFactor {
 public:
  CholeskyFactor() = default;
  explicit CholeskyFactor(const DenseMatrix<T>& a);

  std::size_t dim() const { return lower_.rows(); }

  /// Solves A x = b.
  std::vector<T> solve(std::span<const T> b) const;
  /// Solves A X = B column by column.
  DenseMatrix<T> solve(const DenseMatrix<T>& b) const;

  const DenseMatrix<T>& lower() const { return lower_; }

 private:
  DenseMatrix<T> lower_;
};

using RealCholesky = CholeskyFactor<double>;
using ComplexCholesky = CholeskyFactor<Complex>;

/// K x K Gram matrix H H^H, conjugate-symmetrized exactly.
ComplexMatrix gram(const ComplexMatrix& h);

/// Solves A X = B for Hermitian positive-definite A.
ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// Solves A x = b for symmetric positive-definite A.
RealVector real_solve(const RealMatrix& a, const RealVector& b);

// Small dense helpers used throughout the per-symbol pipeline.

/// y = A x.
ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x);
RealVector matvec(const RealMatrix& a, std::span<const double> x);

/// y = A^H x (adjoint applied without materializing it).
ComplexVector adjoint_matvec(const ComplexMatrix& a, std::span<const Complex> x);

double dot(std::span<const double> a, std::span<const double> b);
/// sum conj(a_i) b_i.
Complex cdot(std::span<const Complex> a, std::span<const Complex> b);

double norm2(std::span<const double> a);
double norm2(std::span<const Complex> a);

}  // namespace cibeam
