#pragma once

// Seeded Monte-Carlo engine: sweep expansion, per-trial scheme evaluation on a shared
// channel draw, aggregation and CSV output.

#include "hybridbeam/baselines.hpp"
#include "hybridbeam/channel.hpp"
#include "hybridbeam/link.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hybridbeam {

enum class SchemeKind { kProposed, kHybridFixed, kDigital, kBruteForce };

struct Scheme {
  SchemeKind kind = SchemeKind::kProposed;
  int bits = 0;  // fixed resolution for kHybridFixed

  std::string name() const;
  bool operator==(const Scheme&) const = default;
};

/// Accepts proposed, brute_force, digital_8bit (full resolution) and hybrid_<b>bit.
std::optional<Scheme> parse_scheme(const std::string& name);

enum class SweepMode { kProduct, kZip };

/// Sweep axes; an empty dimension list means "use the base system value".
struct SweepAxes {
  SweepMode mode = SweepMode::kProduct;
  std::vector<double> snr_db{10.0};
  std::vector<double> gamma_t{0.001};
  std::vector<double> gamma_r{0.5};
  std::vector<int> nt, nr, lt, lr, ns;
};

struct SweepPoint {
  double snr_db = 10.0;
  double gamma_t = 0.001;
  double gamma_r = 0.5;
  SystemDims dims{};
};

struct ExperimentConfig {
  int schema_version = 1;
  std::string name = "experiment";
  SystemDims system{};
  ClusterParams clusters{};
  double element_spacing = 0.5;
  SweepAxes sweep{};
  AdmmConfig admm{};  // carries the bit range
  PowerModel power{};
  std::vector<Scheme> schemes{Scheme{}};
  int trials = 200;
  std::uint64_t base_seed = 1;
  int threads = 1;
  BruteForceOptions bruteforce{};

  void validate() const;
};

inline constexpr int kSchemaVersion = 1;

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& cfg);

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);

/// Stable seed of (base seed, sweep coordinates, trial index).
std::uint64_t trial_seed(std::uint64_t base_seed, const SweepPoint& point, int trial);

struct TrialSeeds {
  std::uint64_t channel;
  DesignSeeds design;
};
TrialSeeds derive_seeds(std::uint64_t trial_seed);

/// FNV-1a over the raw bytes of H.
std::uint64_t channel_hash(const CMatrixd& h);

ChannelRealization<double> trial_channel(const ExperimentConfig& cfg, const SweepPoint& point, std::uint64_t seed);

LinkParams link_params(const ExperimentConfig& cfg, const SweepPoint& point);

struct TrialRecord {
  int point = 0;
  SweepPoint sweep{};
  int trial = 0;
  std::uint64_t seed = 0;
  std::uint64_t channel = 0;
  std::string scheme;
  bool ok = true;
  std::string error;
  double se = 0.0;
  double p_tx = 0.0;
  double p_rx = 0.0;
  double ee = 0.0;
  BitVector bits_tx;
  BitVector bits_rx;
  int tx_iterations = 0;
  int rx_iterations = 0;
  double tx_nmse = 0.0;
  double rx_nmse = 0.0;
  int active_streams = 0;
  int box_warnings = 0;
};

/// Every enabled scheme on one channel draw; failures become records with ok = false.
std::vector<TrialRecord> run_point(const ExperimentConfig& cfg, const SweepPoint& point, int point_index, int trial);

using Progress = std::function<void(int point_index, const std::vector<TrialRecord>& point_records)>;

/// Records ordered by (point, trial, scheme order in the config) regardless of thread count.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const Progress& progress = {});

struct SummaryRow {
  int point = 0;
  SweepPoint sweep{};
  std::string scheme;
  int n = 0;
  int failures = 0;
  double se_mean = 0.0, se_stderr = 0.0;
  double ee_mean = 0.0, ee_stderr = 0.0;
  double p_tx_mean = 0.0, p_rx_mean = 0.0;
  double bits_tx_mean = 0.0, bits_rx_mean = 0.0;
  double tx_nmse_db_mean = 0.0, rx_nmse_db_mean = 0.0;
};

/// Mean and standard error per (point, scheme); groups without successful records are dropped.
std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records);

double mean_of(const BitVector& bits);

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records);
void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows);

// Convergence traces

struct TraceRow {
  int point = 0;
  SweepPoint sweep{};
  std::string side;
  int trial = 0;
  int iteration = 0;
  double nmse = 0.0;
  double z_change = 0.0;
  double primal_residual = 0.0;
};

struct TraceSummaryRow {
  int point = 0;
  SweepPoint sweep{};
  std::string side;
  int iteration = 0;
  int n = 0;
  double nmse_mean = 0.0;  // linear mean over trials, reported in dB too
};

/// Proposed design per trial; runs that stop early are padded with their last sample.
std::vector<TraceRow> run_trace(const ExperimentConfig& cfg);
std::vector<TraceSummaryRow> summarize_trace(const std::vector<TraceRow>& rows);
void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows);
void write_trace_summary_csv(std::ostream& os, const std::vector<TraceSummaryRow>& rows);

// ADMM versus exhaustive search

struct BruteForceRow {
  int point = 0;
  SweepPoint sweep{};
  int trial = 0;
  std::uint64_t seed = 0;
  double ee_proposed = 0.0;
  double ee_bruteforce = 0.0;
  std::vector<double> ee_uniform;  // one per resolution in the bit range
  BitVector bits_tx_bf, bits_rx_bf;
  BitVector bits_tx_proposed, bits_rx_proposed;
};

std::vector<BruteForceRow> run_bruteforce_comparison(const ExperimentConfig& cfg);
void write_bruteforce_csv(std::ostream& os, const std::vector<BruteForceRow>& rows, const BitRange& range);

struct BruteForceGap {
  int point = 0;
  int n = 0;
  double ee_proposed_mean = 0.0;
  double ee_bruteforce_mean = 0.0;
  double gap_mean = 0.0;  // bruteforce - proposed
  double gap_stderr = 0.0;
  double ratio = 0.0;     // proposed mean / bruteforce mean
  int dominated = 0;      // trials where brute force beats or ties every uniform design
};
std::vector<BruteForceGap> summarize_bruteforce(const std::vector<BruteForceRow>& rows);
void write_bruteforce_summary_csv(std::ostream& os, const std::vector<BruteForceGap>& rows);

}  // namespace hybridbeam
