#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cibeam/ci_iterative.hpp"
#include "cibeam/rng.hpp"
#include "cibeam/signal.hpp"
#include "cibeam/zf.hpp"

namespace cibeam {

enum class Precoder {
  kZf,
  kRzf,
  kCiCfStrict,
  kCiCfNonStrict,
  kCiQpStrict,
  kCiQpNonStrict,
};

std::string_view precoder_name(Precoder p);
std::optional<Precoder> parse_precoder(std::string_view name);
bool precoder_uses_nonstrict(Precoder p);

std::string_view mod_name(std::size_t order);
std::optional<std::size_t> parse_mod(std::string_view name);

/// One experiment configuration. SNR is transmit SNR in dB with the
/// convention rho = 1/sigma^2, i.e. sigma^2 = 10^(-snr_db/10); the power
/// budget applies per transmitted symbol vector.
struct SimConfig {
  std::size_t nt = 8;
  std::size_t k = 8;
  std::size_t mod_order = 4;
  std::vector<double> snr_db_grid;
  std::size_t trials = 500;            // channel realizations
  std::size_t symbols_per_trial = 200; // symbol vectors per channel
  std::vector<Precoder> precoders;
  double power_budget = 1.0;
  std::uint64_t seed = 0;
  std::size_t n_max = kUnlimited;
  std::size_t threads = 0;  // 0: hardware concurrency

  /// Throws BadParameter/BadDimensions/UnsupportedModulation naming the
  /// offending field; nothing is computed on an invalid config.
  void validate() const;
};

/// One CSV row. "symbols" counts user symbols (vectors times K), so
/// bits = symbols * log2(M).
struct BerRecord {
  Precoder precoder = Precoder::kZf;
  std::size_t nt = 0;
  std::size_t k = 0;
  std::size_t mod_order = 0;
  double snr_db = 0.0;
  std::size_t n_max = kUnlimited;
  std::size_t trials = 0;
  std::uint64_t symbols = 0;
  std::uint64_t bits = 0;
  std::uint64_t bit_errors = 0;
  std::uint64_t symbol_errors = 0;
  double ber = 0.0;
  double ser = 0.0;
  double avg_iterations = 0.0;
  std::uint64_t fallback_count = 0;
  double avg_solve_micros = 0.0;
  std::uint64_t seed = 0;
};

struct RunResult {
  std::vector<BerRecord> records;
  std::size_t skipped_trials = 0;
  std::vector<std::string> comments;  // extra '#' lines for the CSV
};

/// BER/SER versus SNR for every configured precoder. One channel per trial,
/// per-symbol precoding, shared channel/symbol/noise streams across
/// precoders, deterministic for a fixed seed at any thread count.
RunResult run_ber_sweep(const SimConfig& cfg);

/// Average iteration counts of the closed-form scheme versus K (zero
/// iterations from the short-circuit class included in the mean). Rows carry
/// no error counts; noise is never drawn.
RunResult run_iteration_stats(const SimConfig& base, const std::vector<std::size_t>& k_grid);

/// BER at one SNR point as a function of the iteration budget. The zf row is
/// emitted alongside; with shared seeds the budget-0 rows reproduce it.
RunResult run_tradeoff(const SimConfig& cfg, const std::vector<std::size_t>& n_max_grid);

struct TimingRecord {
  Precoder precoder = Precoder::kZf;
  std::size_t k = 0;
  double avg_micros = 0.0;
  double median_micros = 0.0;
  std::uint64_t symbols = 0;
  double avg_iterations = 0.0;
};

/// Per-symbol solver wall time (monotonic clock around the solve only; the
/// shared kernel build is excluded). Runs single-threaded.
std::vector<TimingRecord> run_timing(const SimConfig& cfg);

RunResult timing_to_records(const SimConfig& cfg, const std::vector<TimingRecord>& timings);

/// Exact column list, stable across runs.
std::string csv_header();

std::string manifest_line(const SimConfig& cfg, std::string_view subcommand);

void write_csv(std::ostream& os, const std::string& manifest, const RunResult& result);

}  // namespace cibeam
