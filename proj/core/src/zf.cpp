#include "cibeam/zf.hpp"

#include <cmath>

namespace cibeam {

ZfResult zf_precode(const ComplexMatrix& h, const ComplexCholesky& gram_chol,
                    const ComplexVector& s, double p0) {
  if (p0 <= 0.0) throw BadParameter("zf: p0 must be > 0");
  if (s.size() != h.rows()) throw BadDimensions("zf: symbol count must equal K");
  ComplexVector y = gram_chol.solve(std::span<const Complex>(s));
  // f from the quadratic form s^H (H H^H)^{-1} s; imaginary part is rounding.
  const double quad = cdot(s, y).real();
  const double f = std::sqrt(quad / p0);
  ComplexVector x = adjoint_matvec(h, y);
  for (auto& e : x) e /= f;
  return {Beamformer{std::move(x), p0}, f};
}

ZfResult zf_precode(const ComplexMatrix& h, const ComplexVector& s, double p0) {
  ComplexCholesky chol(gram(h));
  return zf_precode(h, chol, s, p0);
}

ComplexCholesky rzf_factor(const ComplexMatrix& gram_matrix, double rho) {
  if (rho <= 0.0) throw BadParameter("rzf: rho must be > 0");
  ComplexMatrix loaded = gram_matrix;
  const double load = static_cast<double>(gram_matrix.rows()) / rho;
  for (std::size_t i = 0; i < loaded.rows(); ++i) loaded(i, i) += load;
  return ComplexCholesky(loaded);
}

Beamformer rzf_precode(const ComplexMatrix& h, const ComplexCholesky& loaded_chol,
                       const ComplexVector& s, double p0) {
  if (p0 <= 0.0) throw BadParameter("rzf: p0 must be > 0");
  if (s.size() != h.rows()) throw BadDimensions("rzf: symbol count must equal K");
  ComplexVector y = loaded_chol.solve(std::span<const Complex>(s));
  ComplexVector x = adjoint_matvec(h, y);
  const double f = norm2(std::span<const Complex>(x)) / std::sqrt(p0);
  for (auto& e : x) e /= f;
  return Beamformer{std::move(x), p0};
}

Beamformer rzf_precode(const ComplexMatrix& h, const ComplexVector& s, double p0,
                       double rho) {
  ComplexCholesky chol = rzf_factor(gram(h), rho);
  return rzf_precode(h, chol, s, p0);
}

}  // namespace cibeam
