#pragma once

#include "cibeam/beamformer.hpp"
#include "cibeam/linalg.hpp"

namespace cibeam {

struct ZfResult {
  Beamformer beamformer;
  double scaling = 0.0;  // f: noiseless receive is s / f
};

/// Zero-forcing with symbol-level power normalization:
/// x = (1/f) H^H (H H^H)^{-1} s, f = sqrt(s^H (H H^H)^{-1} s / p0).
ZfResult zf_precode(const ComplexMatrix& h, const ComplexVector& s, double p0);

/// Variant reusing a Gram factorization shared across symbols of one channel.
ZfResult zf_precode(const ComplexMatrix& h, const ComplexCholesky& gram_chol,
                    const ComplexVector& s, double p0);

/// Regularized zero-forcing: x = (1/f) H^H (H H^H + (K/rho) I)^{-1} s with
/// f = ||W s||_F / sqrt(p0). rho is the transmit SNR 1/sigma^2.
Beamformer rzf_precode(const ComplexMatrix& h, const ComplexVector& s, double p0,
                       double rho);

/// Variant reusing the factorization of H H^H + (K/rho) I.
Beamformer rzf_precode(const ComplexMatrix& h, const ComplexCholesky& loaded_chol,
                       const ComplexVector& s, double p0);

/// Factorization of H H^H + (K/rho) I for the shared-factor RZF path.
ComplexCholesky rzf_factor(const ComplexMatrix& gram_matrix, double rho);

}  // namespace cibeam
