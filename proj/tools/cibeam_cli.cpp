// cibeam: constructive-interference symbol-level precoding experiments.
//
// Subcommands: sweep (BER vs SNR), iters (iteration counts vs K),
// tradeoff (BER vs iteration budget), timing (per-symbol solver time),
// inspect (single-instance solver diagnostics).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cibeam/cibeam.hpp"

namespace {

using cibeam::SimConfig;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(text);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  return parts;
}

double parse_double(const std::string& text, const char* flag) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + ": cannot parse '" + text + "' as a number");
  }
}

std::uint64_t parse_u64(const std::string& text, const char* flag) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(std::string(flag) + ": cannot parse '" + text + "' as a non-negative integer");
  }
}

// "a:b:c" start:step:stop in dB, or a single value.
std::vector<double> parse_snr_grid(const std::string& text) {
  const auto parts = split(text, ':');
  if (parts.size() == 1) return {parse_double(parts[0], "--snr")};
  if (parts.size() != 3) {
    throw ConfigError("--snr expects 'start:step:stop' (dB) or a single value, got '" + text + "'");
  }
  const double start = parse_double(parts[0], "--snr");
  const double step = parse_double(parts[1], "--snr");
  const double stop = parse_double(parts[2], "--snr");
  if (step <= 0.0) throw ConfigError("--snr step must be > 0");
  if (stop < start) throw ConfigError("--snr stop must be >= start");
  std::vector<double> grid;
  for (double v = start; v <= stop + 1e-9; v += step) grid.push_back(v);
  return grid;
}

std::vector<cibeam::Precoder> parse_precoders(const std::string& text) {
  std::vector<cibeam::Precoder> out;
  for (const auto& name : split(text, ',')) {
    auto p = cibeam::parse_precoder(name);
    if (!p) {
      throw ConfigError("--precoders: unknown precoder '" + name +
                        "' (expected zf, rzf, ci-cf-strict, ci-cf-nonstrict, "
                        "ci-qp-strict, ci-qp-nonstrict)");
    }
    out.push_back(*p);
  }
  if (out.empty()) throw ConfigError("--precoders: list is empty");
  return out;
}

std::size_t parse_mod_flag(const std::string& text) {
  auto m = cibeam::parse_mod(text);
  if (!m) throw ConfigError("--mod must be one of bpsk, qpsk, 8psk, 16psk (got '" + text + "')");
  return *m;
}

std::size_t parse_nmax_value(const std::string& text) {
  if (text == "-1" || text == "unlimited") return cibeam::kUnlimited;
  return static_cast<std::size_t>(parse_u64(text, "--nmax"));
}

// Raw flag values as typed on the command line; turned into a SimConfig (with
// flag-named complaints) before anything is computed.
struct Flags {
  std::uint64_t nt = 8;
  std::string k = "8";
  std::string mod = "qpsk";
  std::string snr = "0:5:35";
  std::uint64_t trials = 500;
  std::uint64_t symbols = 200;
  std::string precoders = "zf,rzf,ci-cf-strict,ci-cf-nonstrict";
  double p0 = 1.0;
  std::uint64_t seed = 0;
  std::string nmax = "-1";
  std::uint64_t threads = 0;
  std::string out;
};

void add_common_flags(CLI::App* cmd, Flags& f, const std::string& default_out) {
  cmd->add_option("--nt", f.nt, "transmit antennas (count)")->capture_default_str();
  cmd->add_option("--k", f.k, "single-antenna users (count); 'iters' accepts a comma list")
      ->capture_default_str();
  cmd->add_option("--mod", f.mod, "modulation: bpsk|qpsk|8psk|16psk")->capture_default_str();
  cmd->add_option("--snr", f.snr, "transmit SNR grid 'start:step:stop' (dB) or one value")
      ->capture_default_str();
  cmd->add_option("--trials", f.trials, "channel realizations (count)")->capture_default_str();
  cmd->add_option("--symbols", f.symbols, "symbol vectors per channel (count)")
      ->capture_default_str();
  cmd->add_option("--precoders", f.precoders, "comma list of precoders to run")
      ->capture_default_str();
  cmd->add_option("--p0", f.p0, "per-symbol transmit power budget (watts)")
      ->capture_default_str();
  cmd->add_option("--seed", f.seed, "master seed (64-bit); fixes every stream")
      ->capture_default_str();
  cmd->add_option("--nmax", f.nmax,
                  "iteration budget for the closed-form solver (-1 = unlimited); "
                  "'tradeoff' accepts a comma list")
      ->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (0 = machine parallelism)")
      ->capture_default_str();
  f.out = default_out;
  cmd->add_option("--out", f.out, "output CSV path")->capture_default_str();
}

std::size_t parse_single_k(const Flags& f) {
  return static_cast<std::size_t>(parse_u64(f.k, "--k"));
}

SimConfig make_config(const Flags& f, std::size_t k_users) {
  SimConfig cfg;
  cfg.nt = static_cast<std::size_t>(f.nt);
  cfg.k = k_users;
  cfg.mod_order = parse_mod_flag(f.mod);
  cfg.snr_db_grid = parse_snr_grid(f.snr);
  cfg.trials = static_cast<std::size_t>(f.trials);
  cfg.symbols_per_trial = static_cast<std::size_t>(f.symbols);
  cfg.precoders = parse_precoders(f.precoders);
  cfg.power_budget = f.p0;
  cfg.seed = f.seed;
  cfg.n_max = parse_nmax_value(f.nmax);
  cfg.threads = static_cast<std::size_t>(f.threads);

  if (cfg.k < 1) throw ConfigError("--k must be >= 1");
  if (cfg.k > cfg.nt) {
    throw ConfigError("--k must be <= --nt (got --k " + std::to_string(cfg.k) + ", --nt " +
                      std::to_string(cfg.nt) + ")");
  }
  if (cfg.trials < 1) throw ConfigError("--trials must be >= 1");
  if (cfg.symbols_per_trial < 1) throw ConfigError("--symbols must be >= 1");
  if (cfg.power_budget <= 0.0) throw ConfigError("--p0 must be > 0");
  for (auto p : cfg.precoders) {
    if (cibeam::precoder_uses_nonstrict(p) && cfg.mod_order == 2) {
      throw ConfigError("--precoders: " + std::string(cibeam::precoder_name(p)) +
                        " needs --mod with order >= 4 (bpsk has no constructive sector)");
    }
  }
  cfg.validate();
  return cfg;
}

void write_output(const std::string& path, const std::string& manifest,
                  const cibeam::RunResult& result) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file '" + path + "'");
  cibeam::write_csv(os, manifest, result);
  if (!os) throw std::runtime_error("failed writing output file '" + path + "'");
}

std::string fmt_vec(const cibeam::RealVector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v[i]);
    os << buf;
  }
  os << "]";
  return os.str();
}

std::string fmt_cvec(const cibeam::ComplexVector& v) {
  std::ostringstream os;
  os << "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ", ";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f%+.6fj", v[i].real(), v[i].imag());
    os << buf;
  }
  os << "]";
  return os.str();
}

void inspect_mode(const cibeam::CiKernel& kernel, double p0) {
  using namespace cibeam;
  std::printf("mode=%s  n=%zu\n", kernel.mode == CiMode::kStrict ? "strict" : "nonstrict",
              kernel.dim);
  std::printf("  a      = %s\n", fmt_vec(kernel.a).c_str());
  std::printf("  c      = %.8f\n", kernel.c);
  std::string s_set = "{";
  bool first = true;
  for (std::size_t i = 0; i < kernel.a.size(); ++i) {
    if (kernel.a[i] < -kNegEntryEps) {
      if (!first) s_set += ", ";
      s_set += std::to_string(i);
      first = false;
    }
  }
  s_set += "}";
  std::printf("  S      = %s%s\n", s_set.c_str(),
              first ? "  (empty: row-sum point is optimal, ZF-equivalent)" : "");

  IterativeResult res = solve_iterative(kernel, kUnlimited, /*record_trace=*/true);
  if (!res.trace.empty()) {
    std::printf("  %-5s %-9s %-8s %-22s %-16s %-12s %s\n", "iter", "selected", "action",
                "active", "counters", "min(u)", "dual_obj");
    for (const auto& e : res.trace) {
      std::string act = "[";
      for (std::size_t i = 0; i < e.active.size(); ++i) {
        if (i) act += " ";
        act += std::to_string(e.active[i]);
      }
      act += "]";
      std::string cnt = "[";
      for (std::size_t i = 0; i < e.counters.size(); ++i) {
        if (i) cnt += " ";
        cnt += std::to_string(e.counters[i]);
      }
      cnt += "]";
      std::printf("  %-5zu %-9zu %-8s %-22s %-16s %-12.6f %.8f\n", e.iteration, e.selected,
                  e.accepted ? "accept" : "retract", act.c_str(), cnt.c_str(), e.min_u,
                  e.dual_objective);
    }
  }

  CiBeamformer bf = beamformer_from_dual(kernel, p0, res.u);
  std::printf("  closed-form: iterations=%zu converged=%s fallback=%s\n", res.iterations,
              res.converged ? "yes" : "no", res.fallback ? "yes" : "no");
  std::printf("    u         = %s\n", fmt_vec(res.u).c_str());
  std::printf("    lambda    = %s\n", fmt_cvec(bf.dual.lambda).c_str());
  std::printf("    t_star    = %.10f\n", bf.dual.t_star);
  std::printf("    objective = %.10e\n", res.objective);

  if (kernel.dim <= kEnumDimCap) {
    SimplexQp qp(kernel.v);
    SimplexSolution oracle = solve_active_set_enum(qp);
    const double rel = std::abs(oracle.objective - res.objective) /
                       std::max(std::abs(oracle.objective), 1e-300);
    std::printf("  oracle (enumeration over %zu supports):\n", oracle.supports_tried);
    std::printf("    u         = %s\n", fmt_vec(oracle.u).c_str());
    std::printf("    objective = %.10e   (relative gap %.3e)\n", oracle.objective, rel);
  } else {
    SimplexQp qp(kernel.v);
    SimplexSolution oracle = solve_projected_gradient(qp);
    const double rel = std::abs(oracle.objective - res.objective) /
                       std::max(std::abs(oracle.objective), 1e-300);
    std::printf("  oracle (projected gradient, %zu iterations):\n", oracle.iterations);
    std::printf("    objective = %.10e   (relative gap %.3e)\n", oracle.objective, rel);
  }
}

void run_inspect(const Flags& f) {
  using namespace cibeam;
  const std::size_t k_users = parse_single_k(f);
  const std::size_t mod = parse_mod_flag(f.mod);
  if (k_users < 1) throw ConfigError("--k must be >= 1");
  if (k_users > f.nt) throw ConfigError("--k must be <= --nt");
  if (f.p0 <= 0.0) throw ConfigError("--p0 must be > 0");

  Rng master(f.seed);
  Rng rng_ch = master.fork(rng_label::kChannel, 0);
  Rng rng_sym = master.fork(rng_label::kSymbols, 0);
  const Constellation constellation = make_constellation(mod);
  auto ctx = make_channel_context(sample_channel(k_users, f.nt, rng_ch));
  const SymbolVector sv = draw_symbols(constellation, k_users, rng_sym);

  std::printf("instance: nt=%llu k=%zu mod=%s seed=%llu p0=%g\n",
              static_cast<unsigned long long>(f.nt), k_users, std::string(mod_name(mod)).c_str(),
              static_cast<unsigned long long>(f.seed), f.p0);
  std::printf("  s = %s\n", fmt_cvec(sv.s).c_str());

  inspect_mode(build_kernel_strict(ctx, sv.s, f.p0), f.p0);
  if (mod >= 4) {
    inspect_mode(build_kernel_nonstrict(ctx, sv.s, f.p0, constellation.threshold_angle), f.p0);
  } else {
    std::printf("mode=nonstrict skipped: bpsk has no constructive sector\n");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"constructive-interference symbol-level precoding experiments"};
  app.require_subcommand(1);

  Flags sweep_flags;
  Flags iters_flags;
  Flags tradeoff_flags;
  Flags timing_flags;
  Flags inspect_flags;

  CLI::App* sweep = app.add_subcommand("sweep", "BER/SER versus transmit SNR");
  add_common_flags(sweep, sweep_flags, "sweep.csv");

  iters_flags.precoders = "ci-cf-strict,ci-cf-nonstrict";
  iters_flags.snr = "30";
  CLI::App* iters = app.add_subcommand("iters", "average solver iterations versus K");
  add_common_flags(iters, iters_flags, "iters.csv");

  tradeoff_flags.snr = "30";
  tradeoff_flags.nmax = "0,1,2,3,4,5,6,7,8";
  tradeoff_flags.precoders = "zf,ci-cf-strict,ci-cf-nonstrict";
  CLI::App* tradeoff = app.add_subcommand("tradeoff", "BER versus iteration budget at one SNR");
  add_common_flags(tradeoff, tradeoff_flags, "tradeoff.csv");

  timing_flags.snr = "30";
  timing_flags.trials = 100;
  timing_flags.symbols = 60;
  timing_flags.precoders = "zf,ci-cf-strict,ci-qp-strict";
  CLI::App* timing = app.add_subcommand("timing", "per-symbol solver wall time");
  add_common_flags(timing, timing_flags, "timing.csv");

  inspect_flags.k = "4";
  inspect_flags.nt = 4;
  CLI::App* inspect = app.add_subcommand("inspect", "single-instance solver diagnostics");
  add_common_flags(inspect, inspect_flags, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cibeam::RunResult result;
    std::string manifest;
    std::string out_path;

    if (sweep->parsed()) {
      const SimConfig cfg = make_config(sweep_flags, parse_single_k(sweep_flags));
      out_path = sweep_flags.out;
      manifest = cibeam::manifest_line(cfg, "sweep");
      result = cibeam::run_ber_sweep(cfg);
    } else if (iters->parsed()) {
      std::vector<std::size_t> k_grid;
      for (const auto& part : split(iters_flags.k, ',')) {
        k_grid.push_back(static_cast<std::size_t>(parse_u64(part, "--k")));
      }
      const SimConfig base = make_config(iters_flags, k_grid.front());
      for (std::size_t kk : k_grid) {
        if (kk < 1 || kk > base.nt) {
          throw ConfigError("--k entries must satisfy 1 <= k <= --nt (got " + std::to_string(kk) + ")");
        }
      }
      out_path = iters_flags.out;
      manifest = cibeam::manifest_line(base, "iters");
      result = cibeam::run_iteration_stats(base, k_grid);
    } else if (tradeoff->parsed()) {
      std::vector<std::size_t> grid;
      for (const auto& part : split(tradeoff_flags.nmax, ',')) {
        grid.push_back(parse_nmax_value(part));
      }
      Flags f = tradeoff_flags;
      f.nmax = "-1";  // per-row budgets come from the grid
      const SimConfig cfg = make_config(f, parse_single_k(f));
      if (cfg.snr_db_grid.size() != 1) {
        throw ConfigError("--snr must be a single point for tradeoff runs");
      }
      out_path = tradeoff_flags.out;
      manifest = cibeam::manifest_line(cfg, "tradeoff") + " nmax_grid=" + tradeoff_flags.nmax;
      result = cibeam::run_tradeoff(cfg, grid);
    } else if (timing->parsed()) {
      const SimConfig cfg = make_config(timing_flags, parse_single_k(timing_flags));
      out_path = timing_flags.out;
      manifest = cibeam::manifest_line(cfg, "timing");
      result = cibeam::timing_to_records(cfg, cibeam::run_timing(cfg));
    } else if (inspect->parsed()) {
      run_inspect(inspect_flags);
      return 0;
    }

    write_output(out_path, manifest, result);
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cibeam::BadParameter& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cibeam::BadDimensions& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cibeam::UnsupportedOrder& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const cibeam::UnsupportedModulation& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 1;
  }
}
