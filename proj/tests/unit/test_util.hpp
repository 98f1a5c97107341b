#pragma once

// Shared helpers for the randomized tests.

#include <cstdint>

#include "cibeam/cibeam.hpp"

namespace testutil {

using namespace cibeam;

struct Instance {
  std::shared_ptr<const ChannelContext> ctx;
  SymbolVector sv;
  Constellation constellation;
};

inline Instance random_instance(std::uint64_t seed, std::size_t k, std::size_t nt,
                                std::size_t mod = 4) {
  Rng master(seed);
  Rng rc = master.fork(rng_label::kChannel, 0);
  Rng rs = master.fork(rng_label::kSymbols, 0);
  Instance inst;
  inst.constellation = make_constellation(mod);
  inst.ctx = make_channel_context(sample_channel(k, nt, rc));
  inst.sv = draw_symbols(inst.constellation, k, rs);
  return inst;
}

inline RealVector random_simplex(Rng& rng, std::size_t n) {
  RealVector u(n);
  double total = 0.0;
  for (auto& e : u) {
    e = -std::log(1.0 - rng.uniform());
    total += e;
  }
  for (auto& e : u) e /= total;
  return u;
}

inline double rel_gap(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace testutil
