#pragma once

#include "cibeam/linalg.hpp"

namespace cibeam {

/// Symbol-level precoder output. The precoded vector x = W s is the primary
/// representation; all precoders here produce rank-one W = x s^H / K, so the
/// matrix is reconstructed on demand.
struct Beamformer {
  ComplexVector x;            // precoded vector, length N_t
  double power_budget = 0.0;  // ||x||^2 equals this by construction

  /// W = x s^H / K for the symbol vector the precoder was built for.
  ComplexMatrix matrix(const ComplexVector& s) const {
    const std::size_t nt = x.size();
    const std::size_t k = s.size();
    ComplexMatrix w(nt, k);
    const double inv_k = 1.0 / static_cast<double>(k);
    for (std::size_t i = 0; i < nt; ++i) {
      for (std::size_t j = 0; j < k; ++j) {
        w(i, j) = x[i] * std::conj(s[j]) * inv_k;
      }
    }
    return w;
  }
};

}  // namespace cibeam
