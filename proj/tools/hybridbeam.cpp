// hybridbeam: run sweeps, convergence traces and brute-force comparisons from a config file.

#include "hybridbeam/config.hpp"
#include "hybridbeam/sim.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace hybridbeam;

namespace {

struct CommonOptions {
  std::string config;
  std::string out = "out";
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::optional<int> threads;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--config", o.config, "experiment config (YAML)")->required()->check(CLI::ExistingFile);
  cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", o.seed, "base seed (overrides the config)");
  cmd->add_option("--trials", o.trials, "trials per sweep point (overrides the config)")->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig load(const CommonOptions& o) {
  ExperimentConfig cfg = load_config(o.config);
  if (o.seed) cfg.base_seed = *o.seed;
  if (o.trials) cfg.trials = *o.trials;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
  fs::create_directories(o.out);
  return cfg;
}

std::ofstream open_out(const std::string& dir, const std::string& file) {
  const fs::path p = fs::path(dir) / file;
  std::ofstream os(p);
  if (!os) throw std::runtime_error("cannot write " + p.string());
  return os;
}

int cmd_run(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const auto points = expand_sweep(cfg);
  spdlog::info("{}: {} sweep points x {} trials x {} schemes", cfg.name, points.size(), cfg.trials, cfg.schemes.size());
  const auto records = run_experiment(cfg, [&](int pi, const std::vector<TrialRecord>& recs) {
    const SweepPoint& p = points[std::size_t(pi)];
    for (const SummaryRow& s : aggregate(recs))
      fmt::print("point {:>3} snr={:g} gt={:g} gr={:g} nt={} nr={} lt={} lr={} ns={}  {:<13} ee={:.5f} se={:.4f} "
                 "bits_tx={:.2f} bits_rx={:.2f} failed={}\n",
                 pi, p.snr_db, p.gamma_t, p.gamma_r, p.dims.nt, p.dims.nr, p.dims.lt, p.dims.lr, p.dims.ns, s.scheme,
                 s.ee_mean, s.se_mean, s.bits_tx_mean, s.bits_rx_mean, s.failures);
  });
  auto rec = open_out(o.out, "records.csv");
  write_records_csv(rec, records);
  auto sum = open_out(o.out, "summary.csv");
  write_summary_csv(sum, aggregate(records));
  spdlog::info("wrote {}/records.csv and {}/summary.csv", o.out, o.out);
  return 0;
}

int cmd_trace(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const auto rows = run_trace(cfg);
  const auto summary = summarize_trace(rows);
  auto tr = open_out(o.out, "trace.csv");
  write_trace_csv(tr, rows);
  auto ts = open_out(o.out, "trace_summary.csv");
  write_trace_summary_csv(ts, summary);
  for (const TraceSummaryRow& s : summary)
    if (s.iteration == cfg.admm.max_iters)
      fmt::print("point {:>3} nt={} nr={} {} mean nmse at iteration {}: {:.2f} dB\n", s.point, s.sweep.dims.nt,
                 s.sweep.dims.nr, s.side, s.iteration, 10.0 * std::log10(s.nmse_mean));
  spdlog::info("wrote {}/trace.csv and {}/trace_summary.csv", o.out, o.out);
  return 0;
}

int cmd_bruteforce(const CommonOptions& o) {
  const ExperimentConfig cfg = load(o);
  const auto rows = run_bruteforce_comparison(cfg);
  auto bf = open_out(o.out, "bruteforce.csv");
  write_bruteforce_csv(bf, rows, cfg.admm.range);
  const auto gaps = summarize_bruteforce(rows);
  auto bs = open_out(o.out, "bruteforce_summary.csv");
  write_bruteforce_summary_csv(bs, gaps);
  for (const BruteForceGap& g : gaps)
    fmt::print("point {:>3} n={} ee_proposed={:.5f} ee_bruteforce={:.5f} gap={:.5f}+-{:.5f} ratio={:.3f} "
               "dominated={}/{}\n",
               g.point, g.n, g.ee_proposed_mean, g.ee_bruteforce_mean, g.gap_mean, g.gap_stderr, g.ratio, g.dominated,
               g.n);
  spdlog::info("wrote {}/bruteforce.csv and {}/bruteforce_summary.csv", o.out, o.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  spdlog::set_default_logger(spdlog::default_logger()->clone("hybridbeam"));
  spdlog::set_level(spdlog::level::info);
  if (const char* level = std::getenv("HYBRIDBEAM_LOG")) spdlog::set_level(spdlog::level::from_str(level));

  CLI::App app{"Joint converter-resolution and hybrid beamforming design for mmWave links"};
  app.require_subcommand(1);
  CommonOptions run_opts, trace_opts, bf_opts;
  auto* run = app.add_subcommand("run", "Monte-Carlo sweep: records.csv and summary.csv");
  add_common(run, run_opts);
  auto* trace = app.add_subcommand("trace", "per-iteration factorization NMSE: trace.csv");
  add_common(trace, trace_opts);
  auto* bf = app.add_subcommand("bruteforce", "ADMM versus exhaustive bit search: bruteforce.csv");
  add_common(bf, bf_opts);

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(run_opts);
    if (*trace) return cmd_trace(trace_opts);
    if (*bf) return cmd_bruteforce(bf_opts);
  } catch (const ConfigError& e) {
    spdlog::error("config error: {}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return 1;
  }
  return 0;
}
