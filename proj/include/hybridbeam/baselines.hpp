#pragma once

// Comparison schemes: fully digital full resolution, hybrid with uniform fixed resolution,
// and exhaustive per-converter bit search.

#include "hybridbeam/link.hpp"

#include <cstdint>

namespace hybridbeam {

/// L = N on both sides, identity analog stage, delta(M) everywhere, no phase shifters.
LinkOutcome digital_fullbit(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params);

/// Hybrid design with every converter at fixed_bits.
LinkOutcome hybrid_fixedbit(const ChannelRealization<double>& ch, int fixed_bits, const SystemDims& dims,
                            const LinkParams& params, const DesignSeeds& seeds);

struct BruteForceOptions {
  int design_iters = 10;            // frozen-distortion ADMM iterations per combination
  double max_combos = 1e6;          // per side
  int threads = 1;
};

struct BruteForceOutcome {
  LinkOutcome link;
  std::int64_t tx_combos = 0;
  std::int64_t rx_combos = 0;
};

/// Number of per-converter bit combinations for chains converters over range.
double combo_count(int chains, const BitRange& range);

/// Bits of combination index in lexicographic order (first converter most significant).
BitVector combo_bits(std::int64_t index, int chains, const BitRange& range);

/// TX search first on MI(F) / (P_TX + nominal full-resolution P_RX), then RX search on the
/// effective channel maximizing EE. Each combination gets its own frozen-distortion design
/// from the same seed. Ties go to the lexicographically smallest combination.
BruteForceOutcome brute_force(const ChannelRealization<double>& ch, const SystemDims& dims, const LinkParams& params,
                              const DesignSeeds& seeds, const BruteForceOptions& opts = {});

/// Runs fn(i) for i in [0, n) on up to threads workers.
template <typename Fn>
void parallel_for(std::int64_t n, int threads, Fn&& fn);

}  // namespace hybridbeam

#include "hybridbeam/detail/parallel.hpp"
