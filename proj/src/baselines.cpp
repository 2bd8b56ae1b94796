#include "hybridbeam/baselines.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include <fmt/format.h>

namespace hybridbeam {

namespace {

/// Full-resolution digital side: identity analog stage and bb = target / delta(M).
HybridFactors<double> digital_side(const CMatrixd& target, const BitRange& range) {
  HybridFactors<double> f;
  const Eigen::Index n = target.rows();
  const double d = delta_of_bits(double(range.max_bits));
  f.rf = CMatrixd::Identity(n, n);
  f.bits = BitVector::Constant(n, range.max_bits);
  f.delta = RVectord::Constant(n, d);
  f.bb = target / d;
  return f;
}

struct Candidate {
  double value = -std::numeric_limits<double>::infinity();
  std::int64_t index = -1;

  /// Larger value wins; equal values go to the smaller index.
  void offer(double v, std::int64_t i) {
    if (v > value || (v == value && (index < 0 || i < index))) {
      value = v;
      index = i;
    }
  }
};

void check_guard(double count, const char* side, int chains, const BitRange& range, const BruteForceOptions& opts) {
  if (count > opts.max_combos)
    throw std::length_error(fmt::format(
        "brute force: {} side has {:.0f} bit combinations ({} chains x {} resolutions), limit {:.0f}; "
        "reduce the RF chain count or the bit range",
        side, count, chains, range.count(), opts.max_combos));
}

}  // namespace

LinkOutcome digital_fullbit(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params) {
  dims.validate();
  const double nv = params.noise_var();
  const BitRange& range = params.admm.range;
  const DigitalReference<double> ref = digital_references(ch, dims.ns, nv, double(dims.ns));
  LinkOutcome out;
  out.precoder = digital_side(ref.f_dbf, range);
  const EffectiveChannel<double> eff = effective_channel<double>(ch.h, out.precoder.product());
  const CMatrixd w_dbf = active_digital_combiner(eff, dims.ns, nv);
  out.combiner = digital_side(w_dbf, range);
  out.active_streams = int(w_dbf.cols());
  const ArrayDims tx{dims.nt, dims.nt, false};
  const ArrayDims rx{dims.nr, dims.nr, false};
  out.metrics = evaluate_link(out.precoder, out.combiner, ch.h, nv, dims.ns, params.power, tx, rx);
  return out;
}

LinkOutcome hybrid_fixedbit(const ChannelRealization<double>& ch, int fixed_bits, const SystemDims& dims,
                            const LinkParams& params, const DesignSeeds& seeds) {
  const BitRange& range = params.admm.range;
  if (fixed_bits < 1 || fixed_bits > 30)
    throw std::invalid_argument(fmt::format("hybrid_fixedbit: resolution {} outside [1, 30]", fixed_bits));
  const double d = delta_of_bits(double(fixed_bits));
  // widen the range so the frozen value maps back to its own resolution
  LinkParams p = params;
  p.admm.range = BitRange{std::min(range.min_bits, fixed_bits), std::max(range.max_bits, fixed_bits)};
  return design_hybrid_link(ch, dims, p, seeds, RVectord::Constant(dims.lt, d), RVectord::Constant(dims.lr, d));
}

double combo_count(int chains, const BitRange& range) { return std::pow(double(range.count()), chains); }

BitVector combo_bits(std::int64_t index, int chains, const BitRange& range) {
  const int base = range.count();
  BitVector bits(chains);
  for (int i = chains - 1; i >= 0; --i) {
    bits[i] = range.min_bits + int(index % base);
    index /= base;
  }
  return bits;
}

BruteForceOutcome brute_force(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                              const DesignSeeds& seeds, const BruteForceOptions& opts) {
  dims.validate();
  const BitRange& range = params.admm.range;
  const double tx_count = combo_count(dims.lt, range);
  const double rx_count = combo_count(dims.lr, range);
  check_guard(tx_count, "tx", dims.lt, range, opts);
  check_guard(rx_count, "rx", dims.lr, range, opts);

  const double nv = params.noise_var();
  const DigitalReference<double> ref = digital_references(ch, dims.ns, nv, double(dims.ns));
  AdmmConfig cfg = params.admm;
  cfg.max_iters = opts.design_iters;
  cfg.gamma = 0.0;

  auto tx_design = [&](std::int64_t index) {
    const BitVector bits = combo_bits(index, dims.lt, range);
    std::mt19937_64 rng(seeds.tx);
    return design_tx<double>(ref.f_dbf, dims.lt, cfg, rng, distortion_of_bits<double>(bits));
  };
  auto rx_design = [&](std::int64_t index, const CMatrixd& w_dbf) {
    const BitVector bits = combo_bits(index, dims.lr, range);
    std::mt19937_64 rng(seeds.rx);
    return design_rx<double>(w_dbf, dims.lr, cfg, rng, distortion_of_bits<double>(bits));
  };

  BruteForceOutcome out;
  out.tx_combos = std::int64_t(tx_count);
  out.rx_combos = std::int64_t(rx_count);
  const int workers = std::max(1, opts.threads);

  // TX stage
  const double nominal_rx =
      rx_power(BitVector::Constant(dims.lr, range.max_bits), params.power, rx_array(dims));
  std::vector<double> tx_values(std::size_t(out.tx_combos));
  parallel_for(out.tx_combos, workers, [&](std::int64_t i) {
    const AdmmResult<double> r = tx_design(i);
    const double mi = mutual_information(r.factors, ch.h, nv, dims.ns);
    const double p_tx = tx_power(r.factors.product().squaredNorm(), r.factors.bits, params.power, tx_array(dims));
    tx_values[std::size_t(i)] = mi / (p_tx + nominal_rx);
  });
  Candidate tx_pick;
  for (std::int64_t i = 0; i < out.tx_combos; ++i) tx_pick.offer(tx_values[std::size_t(i)], i);
  AdmmResult<double> tx = tx_design(tx_pick.index);

  // RX stage on the effective channel of the chosen precoder
  const EffectiveChannel<double> eff = effective_channel<double>(ch.h, tx.factors.product());
  const CMatrixd w_dbf = active_digital_combiner(eff, dims.ns, nv);
  std::vector<double> rx_values(std::size_t(out.rx_combos));
  parallel_for(out.rx_combos, workers, [&](std::int64_t i) {
    const AdmmResult<double> r = rx_design(i, w_dbf);
    double ee = -std::numeric_limits<double>::infinity();
    try {
      ee = evaluate_link(tx.factors, r.factors, ch.h, nv, dims.ns, params.power, tx_array(dims), rx_array(dims)).ee;
    } catch (const DegenerateError&) {
    }
    rx_values[std::size_t(i)] = ee;
  });
  Candidate rx_pick;
  for (std::int64_t i = 0; i < out.rx_combos; ++i) rx_pick.offer(rx_values[std::size_t(i)], i);
  if (rx_pick.index < 0) throw DegenerateError("brute force: every receive combination is degenerate");
  AdmmResult<double> rx = rx_design(rx_pick.index, w_dbf);

  LinkOutcome& link = out.link;
  link.tx_iterations = tx.iterations;
  link.rx_iterations = rx.iterations;
  link.tx_nmse = tx.final_nmse;
  link.rx_nmse = rx.final_nmse;
  link.tx_trace = std::move(tx.trace);
  link.rx_trace = std::move(rx.trace);
  link.precoder = std::move(tx.factors);
  link.combiner = std::move(rx.factors);
  link.active_streams = int(w_dbf.cols());
  link.metrics = evaluate_link(link.precoder, link.combiner, ch.h, nv, dims.ns, params.power, tx_array(dims),
                               rx_array(dims));
  return out;
}

}  // namespace hybridbeam
