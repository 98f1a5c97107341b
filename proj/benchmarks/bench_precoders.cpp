// Microbenchmarks for the per-symbol pipeline: kernel construction, the
// closed-form active-set solve, the descent oracle, and the linear baselines.

#include <benchmark/benchmark.h>

#include "cibeam/cibeam.hpp"

using namespace cibeam;

namespace {

struct BenchInstance {
  std::shared_ptr<const ChannelContext> ctx;
  SymbolVector sv;
  CiKernel strict_kernel;
  CiKernel nonstrict_kernel;
  ComplexCholesky rzf_chol;
};

BenchInstance make_instance(std::size_t k, std::uint64_t seed) {
  Rng master(seed);
  Rng rc = master.fork(rng_label::kChannel, 0);
  Rng rs = master.fork(rng_label::kSymbols, 0);
  Constellation c = make_constellation(4);
  BenchInstance b;
  b.ctx = make_channel_context(sample_channel(k, k, rc));
  b.sv = draw_symbols(c, k, rs);
  b.strict_kernel = build_kernel_strict(b.ctx, b.sv.s, 1.0);
  b.nonstrict_kernel = build_kernel_nonstrict(b.ctx, b.sv.s, 1.0, c.threshold_angle);
  b.rzf_chol = rzf_factor(b.ctx->gram_matrix, 1000.0);
  return b;
}

void bm_kernel_strict(benchmark::State& state) {
  auto b = make_instance(state.range(0), 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_kernel_strict(b.ctx, b.sv.s, 1.0));
  }
}

void bm_kernel_nonstrict(benchmark::State& state) {
  auto b = make_instance(state.range(0), 7);
  const double theta = make_constellation(4).threshold_angle;
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_kernel_nonstrict(b.ctx, b.sv.s, 1.0, theta));
  }
}

void bm_solve_closed_form(benchmark::State& state) {
  auto b = make_instance(state.range(0), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_iterative(b.strict_kernel));
  }
}

void bm_solve_closed_form_nonstrict(benchmark::State& state) {
  auto b = make_instance(state.range(0), 11);
  for (auto _ : state) {
    benchmark::DoNotOptimize(solve_iterative(b.nonstrict_kernel));
  }
}

void bm_solve_descent(benchmark::State& state) {
  auto b = make_instance(state.range(0), 11);
  for (auto _ : state) {
    SimplexQp qp(b.strict_kernel.v_chol);
    benchmark::DoNotOptimize(solve_projected_gradient(qp, 1e-10, 1000000));
  }
}

void bm_zf(benchmark::State& state) {
  auto b = make_instance(state.range(0), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(zf_precode(b.ctx->h, b.ctx->gram_chol, b.sv.s, 1.0));
  }
}

void bm_rzf(benchmark::State& state) {
  auto b = make_instance(state.range(0), 13);
  for (auto _ : state) {
    benchmark::DoNotOptimize(rzf_precode(b.ctx->h, b.rzf_chol, b.sv.s, 1.0));
  }
}

void bm_beamformer_from_dual(benchmark::State& state) {
  auto b = make_instance(state.range(0), 17);
  IterativeResult r = solve_iterative(b.strict_kernel);
  for (auto _ : state) {
    benchmark::DoNotOptimize(beamformer_from_dual(b.strict_kernel, 1.0, r.u));
  }
}

}  // namespace

BENCHMARK(bm_kernel_strict)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_kernel_nonstrict)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_solve_closed_form)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_solve_closed_form_nonstrict)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_solve_descent)->Arg(2)->Arg(4)->Arg(8);
BENCHMARK(bm_zf)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_rzf)->Arg(2)->Arg(4)->Arg(8)->Arg(16);
BENCHMARK(bm_beamformer_from_dual)->Arg(2)->Arg(4)->Arg(8)->Arg(16);

BENCHMARK_MAIN();
