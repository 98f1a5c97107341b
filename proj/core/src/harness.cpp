#include "cibeam/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "cibeam/qp_simplex.hpp"

namespace cibeam {

namespace {

constexpr double kPgdTol = 1e-10;
constexpr std::size_t kPgdMaxIter = 1000000;  // campaign budget, above the solver default

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string fmt_nmax(std::size_t n_max) {
  return n_max == kUnlimited ? std::string("-1") : std::to_string(n_max);
}

double sigma2_of(double snr_db) { return std::pow(10.0, -snr_db / 10.0); }
double rho_of(double snr_db) { return std::pow(10.0, snr_db / 10.0); }

std::size_t effective_threads(std::size_t requested) {
  if (requested != 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

/// Deterministic trial-parallel loop: each worker owns its partials, trials
/// are claimed from an atomic counter, and all cross-trial reductions are
/// integer sums, so the merged result does not depend on thread count.
template <typename Partial, typename TrialFn, typename MergeFn>
void for_each_trial(std::size_t trials, std::size_t threads, const TrialFn& trial_fn,
                    const MergeFn& merge_fn) {
  const std::size_t workers = std::min(std::max<std::size_t>(threads, 1), std::max<std::size_t>(trials, 1));
  std::atomic<std::size_t> next{0};
  std::mutex merge_mutex;
  auto body = [&]() {
    Partial partial{};
    for (;;) {
      const std::size_t trial = next.fetch_add(1);
      if (trial >= trials) break;
      trial_fn(trial, partial);
    }
    std::lock_guard<std::mutex> lock(merge_mutex);
    merge_fn(partial);
  };
  if (workers <= 1) {
    body();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
}

struct Cell {
  std::uint64_t vectors = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t symbol_errors = 0;
  std::uint64_t iterations = 0;   // solver iterations over all vector solves
  std::uint64_t fallbacks = 0;

  Cell& operator+=(const Cell& o) {
    vectors += o.vectors;
    bit_errors += o.bit_errors;
    symbol_errors += o.symbol_errors;
    iterations += o.iterations;
    fallbacks += o.fallbacks;
    return *this;
  }
};

struct PrecoderPlan {
  Precoder kind;
  std::size_t n_max;  // budget for ci-cf rows (tradeoff sweeps it)
};

struct SweepAccum {
  std::vector<Cell> cells;  // plan-major, snr-minor
  std::uint64_t skipped = 0;
};

/// Shared engine for the BER experiments: runs the per-trial protocol for a
/// list of precoder plans over a common SNR grid.
SweepAccum run_sweep_engine(const SimConfig& cfg, const std::vector<PrecoderPlan>& plans) {
  const Constellation constellation = make_constellation(cfg.mod_order);
  const std::size_t n_snr = cfg.snr_db_grid.size();
  const std::size_t n_cells = plans.size() * n_snr;
  const double theta = constellation.threshold_angle;

  bool need_strict = false;
  bool need_nonstrict = false;
  bool need_rzf = false;
  for (const auto& plan : plans) {
    if (plan.kind == Precoder::kCiCfStrict || plan.kind == Precoder::kCiQpStrict) need_strict = true;
    if (plan.kind == Precoder::kCiCfNonStrict || plan.kind == Precoder::kCiQpNonStrict)
      need_nonstrict = true;
    if (plan.kind == Precoder::kRzf) need_rzf = true;
  }

  std::vector<double> sigmas(n_snr);
  for (std::size_t i = 0; i < n_snr; ++i) sigmas[i] = std::sqrt(sigma2_of(cfg.snr_db_grid[i]));

  SweepAccum total;
  total.cells.assign(n_cells, Cell{});
  const Rng master(cfg.seed);

  auto trial_fn = [&](std::size_t trial, SweepAccum& acc) {
    if (acc.cells.empty()) acc.cells.assign(n_cells, Cell{});
    Rng rng_ch = master.fork(rng_label::kChannel, trial);
    Rng rng_sym = master.fork(rng_label::kSymbols, trial);
    Rng rng_noise = master.fork(rng_label::kNoise, trial);

    std::shared_ptr<const ChannelContext> ctx;
    std::vector<ComplexCholesky> rzf_chols;
    try {
      ctx = make_channel_context(sample_channel(cfg.k, cfg.nt, rng_ch));
      if (need_rzf) {
        rzf_chols.reserve(n_snr);
        for (double snr : cfg.snr_db_grid) {
          rzf_chols.push_back(rzf_factor(ctx->gram_matrix, rho_of(snr)));
        }
      }
    } catch (const NotPositiveDefinite&) {
      ++acc.skipped;
      return;
    }

    // noiseless receive per (plan, snr); only rzf depends on the snr index
    std::vector<ComplexVector> receive(n_cells);
    ComplexVector noise(cfg.k);

    for (std::size_t sym = 0; sym < cfg.symbols_per_trial; ++sym) {
      const SymbolVector sv = draw_symbols(constellation, cfg.k, rng_sym);

      CiKernel kernel_strict;
      CiKernel kernel_nonstrict;
      if (need_strict) kernel_strict = build_kernel_strict(ctx, sv.s, cfg.power_budget);
      if (need_nonstrict)
        kernel_nonstrict = build_kernel_nonstrict(ctx, sv.s, cfg.power_budget, theta);

      for (std::size_t p = 0; p < plans.size(); ++p) {
        const auto& plan = plans[p];
        Cell& first_cell = acc.cells[p * n_snr];
        ComplexVector x;
        switch (plan.kind) {
          case Precoder::kZf: {
            x = zf_precode(ctx->h, ctx->gram_chol, sv.s, cfg.power_budget).beamformer.x;
            break;
          }
          case Precoder::kRzf: {
            for (std::size_t i = 0; i < n_snr; ++i) {
              Beamformer bf = rzf_precode(ctx->h, rzf_chols[i], sv.s, cfg.power_budget);
              receive[p * n_snr + i] = matvec(ctx->h, bf.x);
            }
            break;
          }
          case Precoder::kCiCfStrict:
          case Precoder::kCiCfNonStrict: {
            const CiKernel& kern =
                (plan.kind == Precoder::kCiCfStrict) ? kernel_strict : kernel_nonstrict;
            IterativeResult r = solve_with_budget(kern, plan.n_max);
            first_cell.iterations += r.iterations;
            if (r.fallback) ++first_cell.fallbacks;
            x = beamformer_from_dual(kern, cfg.power_budget, r.u).beamformer.x;
            break;
          }
          case Precoder::kCiQpStrict:
          case Precoder::kCiQpNonStrict: {
            const CiKernel& kern =
                (plan.kind == Precoder::kCiQpStrict) ? kernel_strict : kernel_nonstrict;
            RealVector u;
            try {
              SimplexQp qp(kern.v_chol);
              SimplexSolution sol = solve_projected_gradient(qp, kPgdTol, kPgdMaxIter);
              first_cell.iterations += sol.iterations;
              u = std::move(sol.u);
            } catch (const NotConverged&) {
              // pathological conditioning: the closed form finishes the symbol
              u = solve_iterative(kern).u;
              ++first_cell.fallbacks;
            }
            x = beamformer_from_dual(kern, cfg.power_budget, u).beamformer.x;
            break;
          }
        }
        if (plan.kind != Precoder::kRzf) {
          receive[p * n_snr] = matvec(ctx->h, x);  // snr-independent, stored once
        }
      }

      for (std::size_t i = 0; i < n_snr; ++i) {
        for (std::size_t uu = 0; uu < cfg.k; ++uu) noise[uu] = rng_noise.complex_normal();
        for (std::size_t p = 0; p < plans.size(); ++p) {
          Cell& cell = acc.cells[p * n_snr + i];
          ++cell.vectors;
          const bool per_snr = (plans[p].kind == Precoder::kRzf);
          const ComplexVector& r0 = receive[p * n_snr + (per_snr ? i : 0)];
          for (std::size_t uu = 0; uu < cfg.k; ++uu) {
            const Complex r = r0[uu] + sigmas[i] * noise[uu];
            const std::uint32_t got = detect_index(r, constellation);
            if (got != sv.indices[uu]) {
              ++cell.symbol_errors;
              const std::uint32_t diff =
                  constellation.label_of[got] ^ constellation.label_of[sv.indices[uu]];
              cell.bit_errors += static_cast<std::uint64_t>(std::popcount(diff));
            }
          }
        }
      }
    }
  };

  auto merge = [&](const SweepAccum& acc) {
    if (acc.cells.empty()) return;
    for (std::size_t i = 0; i < n_cells; ++i) total.cells[i] += acc.cells[i];
    total.skipped += acc.skipped;
  };

  for_each_trial<SweepAccum>(cfg.trials, effective_threads(cfg.threads), trial_fn, merge);
  return total;
}

BerRecord make_record(const SimConfig& cfg, const PrecoderPlan& plan, double snr_db,
                      const Cell& cell, const Cell& iter_cell) {
  BerRecord rec;
  rec.precoder = plan.kind;
  rec.nt = cfg.nt;
  rec.k = cfg.k;
  rec.mod_order = cfg.mod_order;
  rec.snr_db = snr_db;
  rec.n_max = plan.n_max;
  rec.trials = cfg.trials;
  const std::size_t bps = make_constellation(cfg.mod_order).bits_per_symbol;
  rec.symbols = cell.vectors * cfg.k;
  rec.bits = rec.symbols * bps;
  rec.bit_errors = cell.bit_errors;
  rec.symbol_errors = cell.symbol_errors;
  rec.ber = rec.bits ? static_cast<double>(rec.bit_errors) / static_cast<double>(rec.bits) : 0.0;
  rec.ser = rec.symbols ? static_cast<double>(rec.symbol_errors) / static_cast<double>(rec.symbols) : 0.0;
  rec.avg_iterations = iter_cell.vectors
                           ? static_cast<double>(iter_cell.iterations) / static_cast<double>(iter_cell.vectors)
                           : 0.0;
  rec.fallback_count = iter_cell.fallbacks;
  rec.avg_solve_micros = 0.0;
  rec.seed = cfg.seed;
  return rec;
}

}  // namespace

std::string_view precoder_name(Precoder p) {
  switch (p) {
    case Precoder::kZf: return "zf";
    case Precoder::kRzf: return "rzf";
    case Precoder::kCiCfStrict: return "ci-cf-strict";
    case Precoder::kCiCfNonStrict: return "ci-cf-nonstrict";
    case Precoder::kCiQpStrict: return "ci-qp-strict";
    case Precoder::kCiQpNonStrict: return "ci-qp-nonstrict";
  }
  return "?";
}

std::optional<Precoder> parse_precoder(std::string_view name) {
  for (Precoder p : {Precoder::kZf, Precoder::kRzf, Precoder::kCiCfStrict,
                     Precoder::kCiCfNonStrict, Precoder::kCiQpStrict, Precoder::kCiQpNonStrict}) {
    if (precoder_name(p) == name) return p;
  }
  return std::nullopt;
}

bool precoder_uses_nonstrict(Precoder p) {
  return p == Precoder::kCiCfNonStrict || p == Precoder::kCiQpNonStrict;
}

std::string_view mod_name(std::size_t order) {
  switch (order) {
    case 2: return "bpsk";
    case 4: return "qpsk";
    case 8: return "8psk";
    case 16: return "16psk";
  }
  return "?";
}

std::optional<std::size_t> parse_mod(std::string_view name) {
  for (std::size_t m : {2u, 4u, 8u, 16u}) {
    if (mod_name(m) == name) return m;
  }
  return std::nullopt;
}

void SimConfig::validate() const {
  if (k < 1) throw BadParameter("k must be >= 1");
  if (nt < k) {
    throw BadDimensions("k must be <= nt (got k=" + std::to_string(k) +
                        ", nt=" + std::to_string(nt) + ")");
  }
  if (mod_order != 2 && mod_order != 4 && mod_order != 8 && mod_order != 16) {
    throw UnsupportedOrder("mod must be one of bpsk, qpsk, 8psk, 16psk");
  }
  if (snr_db_grid.empty()) throw BadParameter("snr grid must be non-empty");
  if (trials < 1) throw BadParameter("trials must be >= 1");
  if (symbols_per_trial < 1) throw BadParameter("symbols must be >= 1");
  if (precoders.empty()) throw BadParameter("precoders must name at least one precoder");
  if (power_budget <= 0.0) throw BadParameter("p0 must be > 0");
  for (Precoder p : precoders) {
    if (precoder_uses_nonstrict(p) && mod_order == 2) {
      throw UnsupportedModulation("precoders: " + std::string(precoder_name(p)) +
                                  " requires mod with order >= 4 (bpsk has no "
                                  "constructive sector)");
    }
  }
}

RunResult run_ber_sweep(const SimConfig& cfg) {
  cfg.validate();
  std::vector<PrecoderPlan> plans;
  plans.reserve(cfg.precoders.size());
  for (Precoder p : cfg.precoders) plans.push_back({p, cfg.n_max});

  SweepAccum acc = run_sweep_engine(cfg, plans);

  RunResult out;
  out.skipped_trials = acc.skipped;
  const std::size_t n_snr = cfg.snr_db_grid.size();
  for (std::size_t p = 0; p < plans.size(); ++p) {
    for (std::size_t i = 0; i < n_snr; ++i) {
      out.records.push_back(make_record(cfg, plans[p], cfg.snr_db_grid[i],
                                        acc.cells[p * n_snr + i], acc.cells[p * n_snr]));
    }
  }
  if (out.skipped_trials > 0) {
    out.comments.push_back("# skipped_trials=" + std::to_string(out.skipped_trials));
  }
  return out;
}

RunResult run_iteration_stats(const SimConfig& base, const std::vector<std::size_t>& k_grid) {
  if (k_grid.empty()) throw BadParameter("k grid must be non-empty");
  RunResult out;
  for (std::size_t k_users : k_grid) {
    SimConfig cfg = base;
    cfg.k = k_users;
    cfg.validate();
    const Constellation constellation = make_constellation(cfg.mod_order);
    const double theta = constellation.threshold_angle;

    struct Partial {
      std::vector<Cell> cells;
      std::uint64_t skipped = 0;
    };
    const std::size_t n_plans = cfg.precoders.size();
    Partial total;
    total.cells.assign(n_plans, Cell{});
    const Rng master(cfg.seed);

    auto trial_fn = [&](std::size_t trial, Partial& acc) {
      if (acc.cells.empty()) acc.cells.assign(n_plans, Cell{});
      Rng rng_ch = master.fork(rng_label::kChannel, trial);
      Rng rng_sym = master.fork(rng_label::kSymbols, trial);
      std::shared_ptr<const ChannelContext> ctx;
      try {
        ctx = make_channel_context(sample_channel(cfg.k, cfg.nt, rng_ch));
      } catch (const NotPositiveDefinite&) {
        ++acc.skipped;
        return;
      }
      for (std::size_t sym = 0; sym < cfg.symbols_per_trial; ++sym) {
        const SymbolVector sv = draw_symbols(constellation, cfg.k, rng_sym);
        for (std::size_t p = 0; p < n_plans; ++p) {
          const Precoder kind = cfg.precoders[p];
          CiKernel kern;
          if (kind == Precoder::kCiCfStrict) {
            kern = build_kernel_strict(ctx, sv.s, cfg.power_budget);
          } else if (kind == Precoder::kCiCfNonStrict) {
            kern = build_kernel_nonstrict(ctx, sv.s, cfg.power_budget, theta);
          } else {
            continue;  // iteration statistics exist only for the closed form
          }
          IterativeResult r = solve_with_budget(kern, cfg.n_max);
          Cell& cell = acc.cells[p];
          ++cell.vectors;
          cell.iterations += r.iterations;
          if (r.fallback) ++cell.fallbacks;
        }
      }
    };
    auto merge = [&](const Partial& acc) {
      if (acc.cells.empty()) return;
      for (std::size_t i = 0; i < n_plans; ++i) total.cells[i] += acc.cells[i];
      total.skipped += acc.skipped;
    };
    for_each_trial<Partial>(cfg.trials, effective_threads(cfg.threads), trial_fn, merge);

    for (std::size_t p = 0; p < n_plans; ++p) {
      const Precoder kind = cfg.precoders[p];
      if (kind != Precoder::kCiCfStrict && kind != Precoder::kCiCfNonStrict) continue;
      BerRecord rec;
      rec.precoder = kind;
      rec.nt = cfg.nt;
      rec.k = cfg.k;
      rec.mod_order = cfg.mod_order;
      rec.snr_db = 0.0;
      rec.n_max = cfg.n_max;
      rec.trials = cfg.trials;
      rec.symbols = total.cells[p].vectors;  // vector solves; no bits sent
      rec.avg_iterations =
          total.cells[p].vectors
              ? static_cast<double>(total.cells[p].iterations) / static_cast<double>(total.cells[p].vectors)
              : 0.0;
      rec.fallback_count = total.cells[p].fallbacks;
      rec.seed = cfg.seed;
      out.records.push_back(rec);
    }
    out.skipped_trials += total.skipped;
  }
  if (out.skipped_trials > 0) {
    out.comments.push_back("# skipped_trials=" + std::to_string(out.skipped_trials));
  }
  return out;
}

RunResult run_tradeoff(const SimConfig& cfg, const std::vector<std::size_t>& n_max_grid) {
  cfg.validate();
  if (cfg.snr_db_grid.size() != 1) {
    throw BadParameter("tradeoff runs at a single snr point");
  }
  if (n_max_grid.empty()) throw BadParameter("nmax grid must be non-empty");

  std::vector<PrecoderPlan> plans;
  for (Precoder p : cfg.precoders) {
    if (p == Precoder::kCiCfStrict || p == Precoder::kCiCfNonStrict) {
      for (std::size_t budget : n_max_grid) plans.push_back({p, budget});
    } else {
      plans.push_back({p, cfg.n_max});
    }
  }

  SweepAccum acc = run_sweep_engine(cfg, plans);

  RunResult out;
  out.skipped_trials = acc.skipped;
  for (std::size_t p = 0; p < plans.size(); ++p) {
    out.records.push_back(
        make_record(cfg, plans[p], cfg.snr_db_grid[0], acc.cells[p], acc.cells[p]));
  }
  if (out.skipped_trials > 0) {
    out.comments.push_back("# skipped_trials=" + std::to_string(out.skipped_trials));
  }
  return out;
}

std::vector<TimingRecord> run_timing(const SimConfig& cfg) {
  cfg.validate();
  const Constellation constellation = make_constellation(cfg.mod_order);
  const double theta = constellation.threshold_angle;
  const double rho = rho_of(cfg.snr_db_grid.front());
  const Rng master(cfg.seed);

  using Clock = std::chrono::steady_clock;
  std::vector<TimingRecord> out;

  for (Precoder kind : cfg.precoders) {
    const bool nonstrict = precoder_uses_nonstrict(kind);
    std::vector<double> micros;
    micros.reserve(cfg.trials * cfg.symbols_per_trial);
    std::uint64_t iterations = 0;
    std::size_t warmup_left = 200;

    for (std::size_t trial = 0; trial < cfg.trials; ++trial) {
      Rng rng_ch = master.fork(rng_label::kChannel, trial);
      Rng rng_sym = master.fork(rng_label::kSymbols, trial);
      std::shared_ptr<const ChannelContext> ctx;
      ComplexCholesky rzf_chol;
      try {
        ctx = make_channel_context(sample_channel(cfg.k, cfg.nt, rng_ch));
        if (kind == Precoder::kRzf) rzf_chol = rzf_factor(ctx->gram_matrix, rho);
      } catch (const NotPositiveDefinite&) {
        continue;
      }
      for (std::size_t sym = 0; sym < cfg.symbols_per_trial; ++sym) {
        const SymbolVector sv = draw_symbols(constellation, cfg.k, rng_sym);
        CiKernel kern;
        if (kind == Precoder::kCiCfStrict || kind == Precoder::kCiQpStrict) {
          kern = build_kernel_strict(ctx, sv.s, cfg.power_budget);
        } else if (nonstrict) {
          kern = build_kernel_nonstrict(ctx, sv.s, cfg.power_budget, theta);
        }

        const auto run_once = [&]() -> std::uint64_t {
          switch (kind) {
            case Precoder::kZf:
              (void)zf_precode(ctx->h, ctx->gram_chol, sv.s, cfg.power_budget);
              return 0;
            case Precoder::kRzf:
              (void)rzf_precode(ctx->h, rzf_chol, sv.s, cfg.power_budget);
              return 0;
            case Precoder::kCiCfStrict:
            case Precoder::kCiCfNonStrict:
              return solve_with_budget(kern, cfg.n_max).iterations;
            case Precoder::kCiQpStrict:
            case Precoder::kCiQpNonStrict: {
              SimplexQp qp(kern.v_chol);
              try {
                return solve_projected_gradient(qp, kPgdTol, kPgdMaxIter).iterations;
              } catch (const NotConverged&) {
                return kPgdMaxIter;  // budget burned; the time still counts
              }
            }
          }
          return 0;
        };

        if (warmup_left > 0) {
          --warmup_left;
          (void)run_once();
          continue;
        }
        const auto begin = Clock::now();
        const std::uint64_t iters = run_once();
        const auto end = Clock::now();
        iterations += iters;
        micros.push_back(std::chrono::duration<double, std::micro>(end - begin).count());
      }
    }

    TimingRecord rec;
    rec.precoder = kind;
    rec.k = cfg.k;
    rec.symbols = micros.size();
    if (!micros.empty()) {
      double sum = 0.0;
      for (double m : micros) sum += m;
      rec.avg_micros = sum / static_cast<double>(micros.size());
      std::vector<double> sorted = micros;
      std::sort(sorted.begin(), sorted.end());
      rec.median_micros = sorted[sorted.size() / 2];
      rec.avg_iterations = static_cast<double>(iterations) / static_cast<double>(micros.size());
    }
    out.push_back(rec);
  }
  return out;
}

RunResult timing_to_records(const SimConfig& cfg, const std::vector<TimingRecord>& timings) {
  RunResult out;
  for (const auto& t : timings) {
    BerRecord rec;
    rec.precoder = t.precoder;
    rec.nt = cfg.nt;
    rec.k = t.k;
    rec.mod_order = cfg.mod_order;
    rec.snr_db = cfg.snr_db_grid.front();
    rec.n_max = cfg.n_max;
    rec.trials = cfg.trials;
    rec.symbols = t.symbols;
    rec.avg_iterations = t.avg_iterations;
    rec.avg_solve_micros = t.avg_micros;
    rec.seed = cfg.seed;
    out.records.push_back(rec);
    out.comments.push_back("# median_solve_micros precoder=" + std::string(precoder_name(t.precoder)) +
                           " k=" + std::to_string(t.k) + " value=" + fmt("%.6g", t.median_micros));
  }
  return out;
}

std::string csv_header() {
  return "precoder,nt,k,mod,snr_db,n_max,trials,symbols,bits,bit_errors,ber,"
         "symbol_errors,ser,avg_iterations,fallback_count,avg_solve_micros,seed";
}

std::string manifest_line(const SimConfig& cfg, std::string_view subcommand) {
  std::ostringstream os;
  os << "# cibeam " << subcommand << " nt=" << cfg.nt << " k=" << cfg.k
     << " mod=" << mod_name(cfg.mod_order) << " snr=";
  for (std::size_t i = 0; i < cfg.snr_db_grid.size(); ++i) {
    if (i) os << ",";
    os << fmt("%.6g", cfg.snr_db_grid[i]);
  }
  os << " trials=" << cfg.trials << " symbols=" << cfg.symbols_per_trial << " precoders=";
  for (std::size_t i = 0; i < cfg.precoders.size(); ++i) {
    if (i) os << ",";
    os << precoder_name(cfg.precoders[i]);
  }
  os << " p0=" << fmt("%.6g", cfg.power_budget) << " seed=" << cfg.seed
     << " nmax=" << fmt_nmax(cfg.n_max);
  return os.str();
}

void write_csv(std::ostream& os, const std::string& manifest, const RunResult& result) {
  os << manifest << "\n";
  for (const auto& c : result.comments) os << c << "\n";
  os << csv_header() << "\n";
  for (const auto& r : result.records) {
    os << precoder_name(r.precoder) << "," << r.nt << "," << r.k << ","
       << mod_name(r.mod_order) << "," << fmt("%.6g", r.snr_db) << "," << fmt_nmax(r.n_max)
       << "," << r.trials << "," << r.symbols << "," << r.bits << "," << r.bit_errors << ","
       << fmt("%.10g", r.ber) << "," << r.symbol_errors << "," << fmt("%.10g", r.ser) << ","
       << fmt("%.10g", r.avg_iterations) << "," << r.fallback_count << ","
       << fmt("%.6g", r.avg_solve_micros) << "," << r.seed << "\n";
  }
}

}  // namespace cibeam
