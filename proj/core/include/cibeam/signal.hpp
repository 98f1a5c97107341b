#pragma once

#include <cstdint>
#include <vector>

#include "cibeam/linalg.hpp"
#include "cibeam/rng.hpp"

namespace cibeam {

/// Unit-modulus PSK constellation with Gray bit labels.
///
/// Points for M >= 4 sit at angles pi/M + 2*pi*m/M so that no point lies on a
/// decision boundary (QPSK contains (1+j)/sqrt(2)); BPSK uses {+1, -1}. The
/// point at position m around the circle carries the Gray label m ^ (m >> 1),
/// packed most-significant-bit first.
struct Constellation {
  std::size_t order = 0;                  // M
  std::size_t bits_per_symbol = 0;        // log2(M)
  double threshold_angle = 0.0;           // half-angle to the decision boundary, pi/M
  double base_angle = 0.0;                // angle of point index 0
  ComplexVector points;                   // index -> point
  std::vector<std::uint32_t> label_of;    // point index -> Gray bit label
  std::vector<std::uint32_t> index_of;    // Gray bit label -> point index
};

/// Builds the M-PSK constellation; M must be one of {2, 4, 8, 16}.
Constellation make_constellation(std::size_t order);

/// Data symbols plus the source bits they encode (MSB-first per symbol).
struct SymbolVector {
  ComplexVector s;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint32_t> indices;  // constellation point index per user
};

/// Draws k uniform symbols by drawing k*log2(M) source bits.
SymbolVector draw_symbols(const Constellation& c, std::size_t k, Rng& rng);

/// K x N_t Rayleigh channel; entries i.i.d. CN(0, 1).
ComplexMatrix sample_channel(std::size_t k, std::size_t nt, Rng& rng);

/// r = H W s + n with n_k ~ CN(0, sigma2).
ComplexVector transmit(const ComplexMatrix& w, const ComplexVector& s,
                       const ComplexMatrix& h, double sigma2, Rng& rng);

/// Same with the precoded vector x = W s already formed.
ComplexVector transmit_precoded(const ComplexVector& x, const ComplexMatrix& h,
                                double sigma2, Rng& rng);

struct Detection {
  ComplexVector symbols;
  std::vector<std::uint8_t> bits;
  std::vector<std::uint32_t> indices;
};

/// Per-entry maximum-likelihood PSK decision by phase sector. Scale-invariant:
/// only the angle of each r_k matters.
Detection detect(const ComplexVector& r, const Constellation& c);

/// Phase-sector decision for a single received sample; returns the point index.
std::uint32_t detect_index(Complex r, const Constellation& c);

}  // namespace cibeam
