#include "cibeam/signal.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace cibeam {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Constellation make_constellation(std::size_t order) {
  if (order != 2 && order != 4 && order != 8 && order != 16) {
    throw UnsupportedOrder("constellation order must be 2, 4, 8 or 16 (got " +
                           std::to_string(order) + ")");
  }
  Constellation c;
  c.order = order;
  c.bits_per_symbol = 0;
  for (std::size_t m = order; m > 1; m >>= 1) ++c.bits_per_symbol;
  c.threshold_angle = std::numbers::pi / static_cast<double>(order);
  c.base_angle = (order == 2) ? 0.0 : c.threshold_angle;
  c.points.resize(order);
  c.label_of.resize(order);
  c.index_of.resize(order);
  for (std::size_t m = 0; m < order; ++m) {
    const double ang = c.base_angle + kTwoPi * static_cast<double>(m) / static_cast<double>(order);
    c.points[m] = {std::cos(ang), std::sin(ang)};
    const auto label = static_cast<std::uint32_t>(m ^ (m >> 1));
    c.label_of[m] = label;
    c.index_of[label] = static_cast<std::uint32_t>(m);
  }
  if (order == 2) {
    c.points = {Complex{1.0, 0.0}, Complex{-1.0, 0.0}};  // exact axis points
  }
  return c;
}

SymbolVector draw_symbols(const Constellation& c, std::size_t k, Rng& rng) {
  SymbolVector sv;
  sv.s.resize(k);
  sv.indices.resize(k);
  sv.bits.reserve(k * c.bits_per_symbol);
  for (std::size_t u = 0; u < k; ++u) {
    std::uint32_t label = 0;
    for (std::size_t b = 0; b < c.bits_per_symbol; ++b) {
      const std::uint8_t bit = rng.bit() ? 1 : 0;
      sv.bits.push_back(bit);
      label = (label << 1) | bit;
    }
    const std::uint32_t idx = c.index_of[label];
    sv.indices[u] = idx;
    sv.s[u] = c.points[idx];
  }
  return sv;
}

ComplexMatrix sample_channel(std::size_t k, std::size_t nt, Rng& rng) {
  if (k == 0 || k > nt) {
    throw BadDimensions("channel: need 1 <= K <= N_t (got K=" + std::to_string(k) +
                        ", N_t=" + std::to_string(nt) + ")");
  }
  ComplexMatrix h(k, nt);
  for (auto& e : h.data()) e = rng.complex_normal();
  return h;
}

ComplexVector transmit_precoded(const ComplexVector& x, const ComplexMatrix& h,
                                double sigma2, Rng& rng) {
  if (sigma2 < 0.0) throw BadParameter("transmit: sigma2 must be >= 0");
  ComplexVector r = matvec(h, x);
  if (sigma2 > 0.0) {
    const double sigma = std::sqrt(sigma2);
    for (auto& e : r) e += sigma * rng.complex_normal();
  }
  return r;
}

ComplexVector transmit(const ComplexMatrix& w, const ComplexVector& s,
                       const ComplexMatrix& h, double sigma2, Rng& rng) {
  return transmit_precoded(matvec(w, s), h, sigma2, rng);
}

std::uint32_t detect_index(Complex r, const Constellation& c) {
  const double ang = std::atan2(r.imag(), r.real());
  const double step = kTwoPi / static_cast<double>(c.order);
  auto m = static_cast<long>(std::lround((ang - c.base_angle) / step));
  const auto order = static_cast<long>(c.order);
  m %= order;
  if (m < 0) m += order;
  return static_cast<std::uint32_t>(m);
}

Detection detect(const ComplexVector& r, const Constellation& c) {
  Detection d;
  d.symbols.resize(r.size());
  d.indices.resize(r.size());
  d.bits.reserve(r.size() * c.bits_per_symbol);
  for (std::size_t u = 0; u < r.size(); ++u) {
    const std::uint32_t idx = detect_index(r[u], c);
    d.indices[u] = idx;
    d.symbols[u] = c.points[idx];
    const std::uint32_t label = c.label_of[idx];
    for (std::size_t b = c.bits_per_symbol; b-- > 0;) {
      d.bits.push_back(static_cast<std::uint8_t>((label >> b) & 1));
    }
  }
  return d;
}

}  // namespace cibeam
