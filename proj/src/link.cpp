#include "hybridbeam/link.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hybridbeam {

void SystemDims::validate() const {
  if (ns < 1) throw std::invalid_argument("system: ns must be >= 1");
  if (!(ns <= lt && lt <= nt)) throw std::invalid_argument("system: need ns <= lt <= nt");
  if (!(ns <= lr && lr <= nr)) throw std::invalid_argument("system: need ns <= lr <= nr");
}

double LinkParams::noise_var() const { return std::pow(10.0, -snr_db / 10.0); }

ArrayDims tx_array(const SystemDims& dims) { return {dims.nt, dims.lt, true}; }
ArrayDims rx_array(const SystemDims& dims) { return {dims.nr, dims.lr, true}; }

LinkMetrics evaluate_link(const HybridPrecoder& precoder, const HybridCombiner& combiner, const CMatrixd& h,
                          double noise_var, int num_streams, const PowerModel& power, const ArrayDims& tx,
                          const ArrayDims& rx) {
  LinkMetrics m;
  const CMatrixd noise = r_eta(precoder, combiner, h, noise_var);
  m.r_eta_cond = condition_number(noise);
  m.se = spectral_efficiency(precoder, combiner, h, noise_var, num_streams);
  m.p_tx = tx_power(precoder.product().squaredNorm(), precoder.bits, power, tx);
  m.p_rx = rx_power(combiner.bits, power, rx);
  m.power = m.p_tx + m.p_rx;
  m.ee = energy_efficiency(m.se, m.p_tx, m.p_rx);
  return m;
}

LinkOutcome design_hybrid_link(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                               const DesignSeeds& seeds, const std::optional<RVectord>& frozen_tx,
                               const std::optional<RVectord>& frozen_rx) {
  dims.validate();
  const double nv = params.noise_var();
  const DigitalReference<double> ref = digital_references(ch, dims.ns, nv, double(dims.ns));

  LinkOutcome out;
  AdmmConfig cfg = params.admm;
  cfg.gamma = params.gamma_t;
  cfg.per_bit_power = params.power.p_dac;
  std::mt19937_64 tx_rng(seeds.tx);
  AdmmResult<double> tx = design_tx<double>(ref.f_dbf, dims.lt, cfg, tx_rng, frozen_tx);

  const EffectiveChannel<double> eff = effective_channel<double>(ch.h, tx.factors.product());
  const CMatrixd w_dbf = active_digital_combiner(eff, dims.ns, nv);

  cfg.gamma = params.gamma_r;
  cfg.per_bit_power = params.power.p_adc;
  std::mt19937_64 rx_rng(seeds.rx);
  AdmmResult<double> rx = design_rx<double>(w_dbf, dims.lr, cfg, rx_rng, frozen_rx);

  out.precoder = std::move(tx.factors);
  out.combiner = std::move(rx.factors);
  out.tx_iterations = tx.iterations;
  out.rx_iterations = rx.iterations;
  out.tx_nmse = tx.final_nmse;
  out.rx_nmse = rx.final_nmse;
  out.tx_trace = std::move(tx.trace);
  out.rx_trace = std::move(rx.trace);
  out.box_warnings = tx.box_warnings + rx.box_warnings;
  out.active_streams = int(w_dbf.cols());
  out.metrics = evaluate_link(out.precoder, out.combiner, ch.h, nv, dims.ns, params.power, tx_array(dims),
                              rx_array(dims));
  return out;
}

LinkOutcome design_proposed(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                            const DesignSeeds& seeds) {
  return design_hybrid_link(ch, dims, params, seeds);
}

}  // namespace hybridbeam
