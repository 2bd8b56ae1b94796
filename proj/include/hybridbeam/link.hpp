#pragma once

// Full TX -> RX link design on one channel realization and its evaluation.

#include "hybridbeam/admm.hpp"
#include "hybridbeam/channel.hpp"
#include "hybridbeam/metrics.hpp"
#include "hybridbeam/power.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace hybridbeam {

struct SystemDims {
  int nt = 32;
  int nr = 5;
  int lt = 5;
  int lr = 5;
  int ns = 5;

  /// N_s <= L <= N on both sides.
  void validate() const;
};

struct LinkParams {
  double snr_db = 10.0;
  double gamma_t = 0.001;
  double gamma_r = 0.5;
  AdmmConfig admm{};  // gamma and per-bit power are filled in per side
  PowerModel power{};

  double noise_var() const;
};

/// Seeds of the two factorization runs; shared by every scheme on a trial so comparisons are paired.
struct DesignSeeds {
  std::uint64_t tx = 1;
  std::uint64_t rx = 2;
};

struct LinkOutcome {
  HybridPrecoder precoder;
  HybridCombiner combiner;
  LinkMetrics metrics;
  int tx_iterations = 0;
  int rx_iterations = 0;
  double tx_nmse = 0.0;  // final, after rounding
  double rx_nmse = 0.0;
  std::vector<ResidualSample> tx_trace;
  std::vector<ResidualSample> rx_trace;
  int box_warnings = 0;
  int active_streams = 0;  // combiner columns actually formed
};

/// SE, powers and EE of a designed link. The transmit term of P_TX is ||F||_F^2.
LinkMetrics evaluate_link(const HybridPrecoder& precoder, const HybridCombiner& combiner, const CMatrixd& h,
                          double noise_var, int num_streams, const PowerModel& power, const ArrayDims& tx,
                          const ArrayDims& rx);

/// Hybrid link with the distortions optionally frozen per side. Unfrozen sides run the joint
/// ADMM with the converter-power penalty; frozen sides skip the distortion update.
LinkOutcome design_hybrid_link(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                               const DesignSeeds& seeds, const std::optional<RVectord>& frozen_tx = std::nullopt,
                               const std::optional<RVectord>& frozen_rx = std::nullopt);

/// Joint bit allocation and hybrid beamforming on both sides.
LinkOutcome design_proposed(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                            const DesignSeeds& seeds);

ArrayDims tx_array(const SystemDims& dims);
ArrayDims rx_array(const SystemDims& dims);

}  // namespace hybridbeam
