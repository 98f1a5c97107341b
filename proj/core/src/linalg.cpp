#include "cibeam/linalg.hpp"

#include <cmath>
#include <string>

namespace cibeam {

namespace {

inline double conj_or_id(double x) { return x; }
inline Complex conj_or_id(const Complex& x) { return std::conj(x); }

inline double real_part(double x) { return x; }
inline double real_part(const Complex& x) { return x.real(); }

inline double abs_sq(double x) { return x * x; }
inline double abs_sq(const Complex& x) { return std::norm(x); }

}  // namespace

template <typename T>
CholeskyFactor<T>::CholeskyFactor(const DenseMatrix<T>& a) {
  const std::size_t n = a.rows();
  if (n == 0 || a.cols() != n) {
    throw BadDimensions("cholesky: matrix must be square and non-empty");
  }

  double trace = 0.0;
  for (std::size_t i = 0; i < n; ++i) trace += real_part(a(i, i));
  const double pivot_floor = kPivotEps * trace / static_cast<double>(n);

  lower_ = DenseMatrix<T>(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = real_part(a(j, j));
    for (std::size_t k = 0; k < j; ++k) d -= abs_sq(lower_(j, k));
    if (!(d > pivot_floor)) {
      throw NotPositiveDefinite("cholesky: pivot " + std::to_string(d) +
                                " at column " + std::to_string(j) +
                                " is at or below the floor " +
                                std::to_string(pivot_floor));
    }
    const double ljj = std::sqrt(d);
    lower_(j, j) = T{ljj};
    for (std::size_t i = j + 1; i < n; ++i) {
      T s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower_(i, k) * conj_or_id(lower_(j, k));
      lower_(i, j) = s / ljj;
    }
  }
}

template <typename T>
std::vector<T> CholeskyFactor<T>::solve(std::span<const T> b) const {
  const std::size_t n = dim();
  if (b.size() != n) throw BadDimensions("cholesky solve: rhs length mismatch");
  std::vector<T> x(b.begin(), b.end());
  // forward: L y = b
  for (std::size_t i = 0; i < n; ++i) {
    T s = x[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower_(i, k) * x[k];
    x[i] = s / lower_(i, i);
  }
  // backward: L^H x = y
  for (std::size_t ii = n; ii-- > 0;) {
    T s = x[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= conj_or_id(lower_(k, ii)) * x[k];
    x[ii] = s / lower_(ii, ii);
  }
  return x;
}

template <typename T>
DenseMatrix<T> CholeskyFactor<T>::solve(const DenseMatrix<T>& b) const {
  const std::size_t n = dim();
  if (b.rows() != n) throw BadDimensions("cholesky solve: rhs rows mismatch");
  DenseMatrix<T> x(n, b.cols());
  std::vector<T> col(n);
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t r = 0; r < n; ++r) col[r] = b(r, c);
    auto sol = solve(std::span<const T>(col));
    for (std::size_t r = 0; r < n; ++r) x(r, c) = sol[r];
  }
  return x;
}

template class CholeskyFactor<double>;
template class CholeskyFactor<Complex>;

ComplexMatrix gram(const ComplexMatrix& h) {
  const std::size_t k = h.rows();
  const std::size_t nt = h.cols();
  ComplexMatrix g(k, k);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i; j < k; ++j) {
      Complex s{};
      for (std::size_t t = 0; t < nt; ++t) s += h(i, t) * std::conj(h(j, t));
      if (i == j) {
        g(i, i) = Complex{s.real(), 0.0};
      } else {
        g(i, j) = s;
        g(j, i) = std::conj(s);
      }
    }
  }
  return g;
}

ComplexMatrix hermitian_solve(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexCholesky chol(a);
  return chol.solve(b);
}

RealVector real_solve(const RealMatrix& a, const RealVector& b) {
  RealCholesky chol(a);
  return chol.solve(std::span<const double>(b));
}

ComplexVector matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  if (x.size() != a.cols()) throw BadDimensions("matvec: length mismatch");
  ComplexVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex s{};
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

RealVector matvec(const RealMatrix& a, std::span<const double> x) {
  if (x.size() != a.cols()) throw BadDimensions("matvec: length mismatch");
  RealVector y(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double s = 0.0;
    auto r = a.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    y[i] = s;
  }
  return y;
}

ComplexVector adjoint_matvec(const ComplexMatrix& a, std::span<const Complex> x) {
  if (x.size() != a.rows()) throw BadDimensions("adjoint_matvec: length mismatch");
  ComplexVector y(a.cols(), Complex{});
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    const Complex xi = x[i];
    for (std::size_t j = 0; j < r.size(); ++j) y[j] += std::conj(r[j]) * xi;
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Complex cdot(std::span<const Complex> a, std::span<const Complex> b) {
  Complex s{};
  for (std::size_t i = 0; i < a.size(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm2(std::span<const Complex> a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

}  // namespace cibeam
