#include "hybridbeam/sim.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>

#include <fmt/format.h>
#include <fmt/ostream.h>
#include <spdlog/spdlog.h>

namespace hybridbeam {

std::string Scheme::name() const {
  switch (kind) {
    case SchemeKind::kProposed: return "proposed";
    case SchemeKind::kBruteForce: return "brute_force";
    case SchemeKind::kDigital: return "digital_8bit";
    case SchemeKind::kHybridFixed: return fmt::format("hybrid_{}bit", bits);
  }
  return "unknown";
}

std::optional<Scheme> parse_scheme(const std::string& name) {
  if (name == "proposed") return Scheme{SchemeKind::kProposed, 0};
  if (name == "brute_force") return Scheme{SchemeKind::kBruteForce, 0};
  if (name == "digital_8bit") return Scheme{SchemeKind::kDigital, 0};
  const std::string prefix = "hybrid_", suffix = "bit";
  if (name.size() > prefix.size() + suffix.size() && name.starts_with(prefix) && name.ends_with(suffix)) {
    const std::string digits = name.substr(prefix.size(), name.size() - prefix.size() - suffix.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 2) return std::nullopt;
    const int b = std::stoi(digits);
    if (b >= 1 && b <= 30) return Scheme{SchemeKind::kHybridFixed, b};
  }
  return std::nullopt;
}

void ExperimentConfig::validate() const {
  if (schema_version != kSchemaVersion)
    throw std::invalid_argument(fmt::format("schema_version: expected {}, got {}", kSchemaVersion, schema_version));
  if (trials < 1) throw std::invalid_argument("trials: must be >= 1");
  if (threads < 1) throw std::invalid_argument("threads: must be >= 1");
  if (schemes.empty()) throw std::invalid_argument("schemes: no schemes enabled");
  if (!(element_spacing > 0.0)) throw std::invalid_argument("channel.element_spacing: must be > 0");
  clusters.validate();
  admm.validate();
  power.validate();
  if (bruteforce.design_iters < 1) throw std::invalid_argument("bruteforce.design_iters: must be >= 1");
  if (!(bruteforce.max_combos >= 1.0)) throw std::invalid_argument("bruteforce.max_combos: must be >= 1");
  if (sweep.snr_db.empty() || sweep.gamma_t.empty() || sweep.gamma_r.empty())
    throw std::invalid_argument("sweep: snr_db, gamma_t and gamma_r need at least one value");
  for (double g : sweep.gamma_t)
    if (!(g >= 0.0)) throw std::invalid_argument("sweep.gamma_t: values must be >= 0");
  for (double g : sweep.gamma_r)
    if (!(g >= 0.0)) throw std::invalid_argument("sweep.gamma_r: values must be >= 0");
  for (const SweepPoint& p : expand_sweep(*this)) p.dims.validate();
}

std::vector<SweepPoint> expand_sweep(const ExperimentConfig& cfg) {
  const SweepAxes& ax = cfg.sweep;
  auto ints = [](const std::vector<int>& v, int base) { return v.empty() ? std::vector<int>{base} : v; };
  const std::vector<int> nt = ints(ax.nt, cfg.system.nt), nr = ints(ax.nr, cfg.system.nr),
                         lt = ints(ax.lt, cfg.system.lt), lr = ints(ax.lr, cfg.system.lr),
                         ns = ints(ax.ns, cfg.system.ns);
  const std::vector<std::size_t> sizes{ax.snr_db.size(), ax.gamma_t.size(), ax.gamma_r.size(), nt.size(),
                                       nr.size(),        lt.size(),         lr.size(),         ns.size()};
  auto make = [&](const std::vector<std::size_t>& idx) {
    SweepPoint p;
    p.snr_db = ax.snr_db[idx[0]];
    p.gamma_t = ax.gamma_t[idx[1]];
    p.gamma_r = ax.gamma_r[idx[2]];
    p.dims = SystemDims{nt[idx[3]], nr[idx[4]], lt[idx[5]], lr[idx[6]], ns[idx[7]]};
    return p;
  };

  std::vector<SweepPoint> points;
  if (ax.mode == SweepMode::kZip) {
    // axes of length 1 broadcast; the rest must agree
    std::size_t len = 1;
    for (std::size_t s : sizes)
      if (s != 1) {
        if (len != 1 && s != len) throw std::invalid_argument("sweep: zip mode needs equal-length axes (or length 1)");
        len = s;
      }
    for (std::size_t k = 0; k < len; ++k) {
      std::vector<std::size_t> idx(sizes.size());
      for (std::size_t a = 0; a < sizes.size(); ++a) idx[a] = sizes[a] == 1 ? 0 : k;
      points.push_back(make(idx));
    }
    return points;
  }
  // product mode, first axis slowest
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    points.push_back(make(idx));
    std::size_t a = sizes.size();
    while (a > 0) {
      --a;
      if (++idx[a] < sizes[a]) break;
      idx[a] = 0;
      if (a == 0) return points;
    }
  }
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) { return mix64(seed ^ mix64(value)); }

std::uint64_t trial_seed(std::uint64_t base_seed, const SweepPoint& p, int trial) {
  std::uint64_t h = mix64(base_seed);
  for (double v : {p.snr_db, p.gamma_t, p.gamma_r}) h = hash_combine(h, std::bit_cast<std::uint64_t>(v));
  for (int v : {p.dims.nt, p.dims.nr, p.dims.lt, p.dims.lr, p.dims.ns}) h = hash_combine(h, std::uint64_t(v));
  return hash_combine(h, std::uint64_t(trial));
}

TrialSeeds derive_seeds(std::uint64_t seed) {
  return {hash_combine(seed, 0x63), {hash_combine(seed, 0x7478), hash_combine(seed, 0x7278)}};
}

std::uint64_t channel_hash(const CMatrixd& h) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(h.data());
  for (std::size_t i = 0; i < std::size_t(h.size()) * sizeof(std::complex<double>); ++i) {
    hash ^= bytes[i];
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

ChannelRealization<double> trial_channel(const ExperimentConfig& cfg, const SweepPoint& point, std::uint64_t seed) {
  std::mt19937_64 rng(derive_seeds(seed).channel);
  return draw_channel<double>(rng, ArrayGeometry{point.dims.nt, cfg.element_spacing},
                              ArrayGeometry{point.dims.nr, cfg.element_spacing}, cfg.clusters);
}

LinkParams link_params(const ExperimentConfig& cfg, const SweepPoint& point) {
  LinkParams p;
  p.snr_db = point.snr_db;
  p.gamma_t = point.gamma_t;
  p.gamma_r = point.gamma_r;
  p.admm = cfg.admm;
  p.power = cfg.power;
  return p;
}

namespace {

LinkOutcome run_scheme(const Scheme& s, const ExperimentConfig& cfg, const ChannelRealization<double>& ch,
                       const SweepPoint& point, const LinkParams& params, const DesignSeeds& seeds) {
  switch (s.kind) {
    case SchemeKind::kProposed: return design_proposed(ch, point.dims, params, seeds);
    case SchemeKind::kHybridFixed: return hybrid_fixedbit(ch, s.bits, point.dims, params, seeds);
    case SchemeKind::kDigital: return digital_fullbit(ch, point.dims, params);
    case SchemeKind::kBruteForce: {
      BruteForceOptions opts = cfg.bruteforce;
      opts.threads = 1;  // trials are already spread over the pool
      return brute_force(ch, point.dims, params, seeds, opts).link;
    }
  }
  throw std::logic_error("unknown scheme");
}

}  // namespace

std::vector<TrialRecord> run_point(const ExperimentConfig& cfg, const SweepPoint& point, int point_index, int trial) {
  const std::uint64_t seed = trial_seed(cfg.base_seed, point, trial);
  const TrialSeeds seeds = derive_seeds(seed);
  const ChannelRealization<double> ch = trial_channel(cfg, point, seed);
  const std::uint64_t hash = channel_hash(ch.h);
  const LinkParams params = link_params(cfg, point);

  std::vector<TrialRecord> out;
  for (const Scheme& s : cfg.schemes) {
    TrialRecord r;
    r.point = point_index;
    r.sweep = point;
    r.trial = trial;
    r.seed = seed;
    r.channel = hash;
    r.scheme = s.name();
    try {
      const LinkOutcome link = run_scheme(s, cfg, ch, point, params, seeds.design);
      r.se = link.metrics.se;
      r.p_tx = link.metrics.p_tx;
      r.p_rx = link.metrics.p_rx;
      r.ee = link.metrics.ee;
      r.bits_tx = link.precoder.bits;
      r.bits_rx = link.combiner.bits;
      r.tx_iterations = link.tx_iterations;
      r.rx_iterations = link.rx_iterations;
      r.tx_nmse = link.tx_nmse;
      r.rx_nmse = link.rx_nmse;
      r.active_streams = link.active_streams;
      r.box_warnings = link.box_warnings;
    } catch (const std::exception& e) {
      r.ok = false;
      r.error = e.what();
      spdlog::warn("point {} trial {} scheme {}: {}", point_index, trial, r.scheme, e.what());
    }
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg, const Progress& progress) {
  cfg.validate();
  const std::vector<SweepPoint> points = expand_sweep(cfg);
  std::vector<TrialRecord> all;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    std::vector<std::vector<TrialRecord>> per_trial(std::size_t(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](std::int64_t t) {
      per_trial[std::size_t(t)] = run_point(cfg, points[pi], int(pi), int(t));
    });
    std::vector<TrialRecord> point_records;
    for (auto& v : per_trial)
      for (auto& r : v) point_records.push_back(std::move(r));
    if (progress) progress(int(pi), point_records);
    all.insert(all.end(), point_records.begin(), point_records.end());
  }
  return all;
}

double mean_of(const BitVector& bits) { return bits.size() ? bits.cast<double>().mean() : 0.0; }

namespace {

struct Stat {
  double sum = 0.0, sum_sq = 0.0;
  int n = 0;
  void add(double v) {
    sum += v;
    sum_sq += v * v;
    ++n;
  }
  double mean() const { return n ? sum / n : 0.0; }
  /// sample std / sqrt(n); 0 for a single sample
  double stderr_() const {
    if (n < 2) return 0.0;
    const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1));
    return std::sqrt(var / n);
  }
};

std::string join_bits(const BitVector& bits) {
  std::string s;
  for (Eigen::Index i = 0; i < bits.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(bits[i]);
  }
  return s;
}

std::string num(double v) { return fmt::format("{:.10g}", v); }

std::string sweep_cols(const SweepPoint& p) {
  return fmt::format("{},{},{},{},{},{},{},{}", num(p.snr_db), num(p.gamma_t), num(p.gamma_r), p.dims.nt,
                     p.dims.nr, p.dims.lt, p.dims.lr, p.dims.ns);
}

constexpr const char* kSweepHeader = "snr_db,gamma_t,gamma_r,nt,nr,lt,lr,ns";

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

double to_db_or_floor(double x) { return x > 0.0 ? 10.0 * std::log10(x) : -400.0; }

}  // namespace

std::vector<SummaryRow> aggregate(const std::vector<TrialRecord>& records) {
  struct Acc {
    SweepPoint sweep;
    int failures = 0;
    std::size_t order = 0;
    Stat se, ee, p_tx, p_rx, bt, br, nt, nr;
  };
  // key by (point, scheme); schemes keep first-seen order within a point
  std::map<std::pair<int, std::string>, Acc> groups;
  std::map<int, std::vector<std::string>> scheme_order;
  for (const TrialRecord& r : records) {
    auto key = std::make_pair(r.point, r.scheme);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) {
      it->second.sweep = r.sweep;
      scheme_order[r.point].push_back(r.scheme);
    }
    Acc& a = it->second;
    if (!r.ok) {
      ++a.failures;
      continue;
    }
    a.se.add(r.se);
    a.ee.add(r.ee);
    a.p_tx.add(r.p_tx);
    a.p_rx.add(r.p_rx);
    a.bt.add(mean_of(r.bits_tx));
    a.br.add(mean_of(r.bits_rx));
    a.nt.add(to_db_or_floor(r.tx_nmse));
    a.nr.add(to_db_or_floor(r.rx_nmse));
  }
  std::vector<SummaryRow> rows;
  for (const auto& [point, names] : scheme_order) {
    for (const std::string& name : names) {
      const Acc& a = groups.at({point, name});
      if (a.se.n == 0) {
        spdlog::warn("aggregate: point {} scheme {} has no successful records", point, name);
        continue;
      }
      SummaryRow s;
      s.point = point;
      s.sweep = a.sweep;
      s.scheme = name;
      s.n = a.se.n;
      s.failures = a.failures;
      s.se_mean = a.se.mean();
      s.se_stderr = a.se.stderr_();
      s.ee_mean = a.ee.mean();
      s.ee_stderr = a.ee.stderr_();
      s.p_tx_mean = a.p_tx.mean();
      s.p_rx_mean = a.p_rx.mean();
      s.bits_tx_mean = a.bt.mean();
      s.bits_rx_mean = a.br.mean();
      s.tx_nmse_db_mean = a.nt.mean();
      s.rx_nmse_db_mean = a.nr.mean();
      rows.push_back(s);
    }
  }
  return rows;
}

void write_records_csv(std::ostream& os, const std::vector<TrialRecord>& records) {
  os << "point," << kSweepHeader
     << ",trial,seed,channel_hash,scheme,status,se,p_tx,p_rx,ee,bits_tx,bits_rx,mean_bits_tx,mean_bits_rx,"
        "tx_iterations,rx_iterations,tx_nmse_db,rx_nmse_db,active_streams,box_warnings,error\n";
  for (const TrialRecord& r : records) {
    fmt::print(os, "{},{},{},{},{:016x},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", r.point,
               sweep_cols(r.sweep), r.trial, r.seed, r.channel, r.scheme, r.ok ? "ok" : "failed", num(r.se),
               num(r.p_tx), num(r.p_rx), num(r.ee), join_bits(r.bits_tx), join_bits(r.bits_rx),
               num(mean_of(r.bits_tx)), num(mean_of(r.bits_rx)), r.tx_iterations, r.rx_iterations,
               num(to_db_or_floor(r.tx_nmse)), num(to_db_or_floor(r.rx_nmse)), r.active_streams, r.box_warnings,
               csv_escape(r.error));
  }
}

void write_summary_csv(std::ostream& os, const std::vector<SummaryRow>& rows) {
  os << "point," << kSweepHeader
     << ",scheme,n,failures,se_mean,se_stderr,ee_mean,ee_stderr,p_tx_mean,p_rx_mean,bits_tx_mean,bits_rx_mean,"
        "tx_nmse_db_mean,rx_nmse_db_mean\n";
  for (const SummaryRow& s : rows) {
    fmt::print(os, "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", s.point, sweep_cols(s.sweep), s.scheme, s.n,
               s.failures, num(s.se_mean), num(s.se_stderr), num(s.ee_mean), num(s.ee_stderr), num(s.p_tx_mean),
               num(s.p_rx_mean), num(s.bits_tx_mean), num(s.bits_rx_mean), num(s.tx_nmse_db_mean),
               num(s.rx_nmse_db_mean));
  }
}

std::vector<TraceRow> run_trace(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<SweepPoint> points = expand_sweep(cfg);
  std::vector<TraceRow> all;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const SweepPoint& point = points[pi];
    std::vector<std::vector<TraceRow>> per_trial(std::size_t(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](std::int64_t t) {
      const std::uint64_t seed = trial_seed(cfg.base_seed, point, int(t));
      const ChannelRealization<double> ch = trial_channel(cfg, point, seed);
      const LinkOutcome link = design_proposed(ch, point.dims, link_params(cfg, point), derive_seeds(seed).design);
      auto emit = [&](const std::vector<ResidualSample>& trace, const char* side) {
        for (int it = 1; it <= cfg.admm.max_iters; ++it) {
          const ResidualSample& s = trace[std::size_t(std::min<int>(it, int(trace.size())) - 1)];
          per_trial[std::size_t(t)].push_back(
              TraceRow{int(pi), point, side, int(t), it, s.nmse, s.z_change, s.primal_residual});
        }
      };
      emit(link.tx_trace, "tx");
      emit(link.rx_trace, "rx");
    });
    for (auto& v : per_trial) all.insert(all.end(), v.begin(), v.end());
  }
  return all;
}

std::vector<TraceSummaryRow> summarize_trace(const std::vector<TraceRow>& rows) {
  std::map<std::tuple<int, std::string, int>, std::pair<TraceSummaryRow, Stat>> acc;
  for (const TraceRow& r : rows) {
    auto& [row, stat] = acc[{r.point, r.side, r.iteration}];
    row.point = r.point;
    row.sweep = r.sweep;
    row.side = r.side;
    row.iteration = r.iteration;
    stat.add(r.nmse);
  }
  std::vector<TraceSummaryRow> out;
  for (auto& [key, v] : acc) {
    v.first.n = v.second.n;
    v.first.nmse_mean = v.second.mean();
    out.push_back(v.first);
  }
  return out;
}

void write_trace_csv(std::ostream& os, const std::vector<TraceRow>& rows) {
  os << "point," << kSweepHeader << ",side,trial,iteration,nmse_db,z_change,primal_residual\n";
  for (const TraceRow& r : rows)
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", r.point, sweep_cols(r.sweep), r.side, r.trial, r.iteration,
               num(to_db_or_floor(r.nmse)), num(r.z_change), num(r.primal_residual));
}

void write_trace_summary_csv(std::ostream& os, const std::vector<TraceSummaryRow>& rows) {
  os << "point," << kSweepHeader << ",side,iteration,n,nmse_mean,nmse_mean_db\n";
  for (const TraceSummaryRow& r : rows)
    fmt::print(os, "{},{},{},{},{},{},{}\n", r.point, sweep_cols(r.sweep), r.side, r.iteration, r.n,
               num(r.nmse_mean), num(to_db_or_floor(r.nmse_mean)));
}

std::vector<BruteForceRow> run_bruteforce_comparison(const ExperimentConfig& cfg) {
  cfg.validate();
  const std::vector<SweepPoint> points = expand_sweep(cfg);
  const BitRange& range = cfg.admm.range;
  std::vector<BruteForceRow> all;
  for (std::size_t pi = 0; pi < points.size(); ++pi) {
    const SweepPoint& point = points[pi];
    // fail fast on the guard before spending any trial
    BruteForceOptions opts = cfg.bruteforce;
    for (int chains : {point.dims.lt, point.dims.lr})
      if (combo_count(chains, range) > opts.max_combos)
        throw std::length_error(fmt::format(
            "brute force: {:.0f} bit combinations for {} chains over [{}, {}] exceed the limit {:.0f}; "
            "use fewer RF chains or a narrower bit range",
            combo_count(chains, range), chains, range.min_bits, range.max_bits, opts.max_combos));
    std::vector<BruteForceRow> rows(std::size_t(cfg.trials));
    parallel_for(cfg.trials, cfg.threads, [&](std::int64_t t) {
      const std::uint64_t seed = trial_seed(cfg.base_seed, point, int(t));
      const TrialSeeds seeds = derive_seeds(seed);
      const ChannelRealization<double> ch = trial_channel(cfg, point, seed);
      const LinkParams params = link_params(cfg, point);
      BruteForceOptions local = opts;
      local.threads = 1;
      BruteForceRow& row = rows[std::size_t(t)];
      row.point = int(pi);
      row.sweep = point;
      row.trial = int(t);
      row.seed = seed;
      const LinkOutcome prop = design_proposed(ch, point.dims, params, seeds.design);
      row.ee_proposed = prop.metrics.ee;
      row.bits_tx_proposed = prop.precoder.bits;
      row.bits_rx_proposed = prop.combiner.bits;
      const BruteForceOutcome bf = brute_force(ch, point.dims, params, seeds.design, local);
      row.ee_bruteforce = bf.link.metrics.ee;
      row.bits_tx_bf = bf.link.precoder.bits;
      row.bits_rx_bf = bf.link.combiner.bits;
      // uniform designs built exactly like the search candidates
      for (int b = range.min_bits; b <= range.max_bits; ++b) {
        LinkParams p = params;
        p.admm.max_iters = local.design_iters;
        row.ee_uniform.push_back(hybrid_fixedbit(ch, b, point.dims, p, seeds.design).metrics.ee);
      }
    });
    all.insert(all.end(), rows.begin(), rows.end());
  }
  return all;
}

void write_bruteforce_csv(std::ostream& os, const std::vector<BruteForceRow>& rows, const BitRange& range) {
  os << "point," << kSweepHeader << ",trial,seed,ee_proposed,ee_bruteforce";
  for (int b = range.min_bits; b <= range.max_bits; ++b) os << ",ee_uniform_" << b << "bit";
  os << ",bits_tx_bruteforce,bits_rx_bruteforce,bits_tx_proposed,bits_rx_proposed\n";
  for (const BruteForceRow& r : rows) {
    fmt::print(os, "{},{},{},{},{},{}", r.point, sweep_cols(r.sweep), r.trial, r.seed, num(r.ee_proposed),
               num(r.ee_bruteforce));
    for (double e : r.ee_uniform) os << ',' << num(e);
    fmt::print(os, ",{},{},{},{}\n", join_bits(r.bits_tx_bf), join_bits(r.bits_rx_bf),
               join_bits(r.bits_tx_proposed), join_bits(r.bits_rx_proposed));
  }
}

std::vector<BruteForceGap> summarize_bruteforce(const std::vector<BruteForceRow>& rows) {
  std::map<int, std::tuple<Stat, Stat, Stat, int>> acc;
  for (const BruteForceRow& r : rows) {
    auto& [prop, bf, gap, dominated] = acc[r.point];
    prop.add(r.ee_proposed);
    bf.add(r.ee_bruteforce);
    gap.add(r.ee_bruteforce - r.ee_proposed);
    bool dom = true;
    for (double e : r.ee_uniform) dom = dom && r.ee_bruteforce >= e;
    dominated += dom ? 1 : 0;
  }
  std::vector<BruteForceGap> out;
  for (const auto& [point, v] : acc) {
    const auto& [prop, bf, gap, dominated] = v;
    BruteForceGap g;
    g.point = point;
    g.n = prop.n;
    g.ee_proposed_mean = prop.mean();
    g.ee_bruteforce_mean = bf.mean();
    g.gap_mean = gap.mean();
    g.gap_stderr = gap.stderr_();
    g.ratio = bf.mean() > 0.0 ? prop.mean() / bf.mean() : 0.0;
    g.dominated = dominated;
    out.push_back(g);
  }
  return out;
}

void write_bruteforce_summary_csv(std::ostream& os, const std::vector<BruteForceGap>& rows) {
  os << "point,n,ee_proposed_mean,ee_bruteforce_mean,gap_mean,gap_stderr,ratio,dominated_trials\n";
  for (const BruteForceGap& g : rows)
    fmt::print(os, "{},{},{},{},{},{},{},{}\n", g.point, g.n, num(g.ee_proposed_mean), num(g.ee_bruteforce_mean),
               num(g.gap_mean), num(g.gap_stderr), num(g.ratio), g.dominated);
}

}  // namespace hybridbeam
