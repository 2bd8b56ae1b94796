#pragma once

#include "hybridbeam/quant.hpp"
#include "hybridbeam/types.hpp"

#include <stdexcept>

namespace hybridbeam {

/// Lumped power constants, in watts.
struct PowerModel {
  double p_dac = 0.1;     // per 2^b step of one DAC
  double p_adc = 0.1;     // per 2^b step of one ADC
  double p_ct = 10.0;     // TX circuit
  double p_cr = 10.0;     // RX circuit
  double p_pt = 0.01;     // per TX phase shifter
  double p_pr = 0.01;     // per RX phase shifter
  double p_t = 0.1;       // per TX antenna
  double p_r = 0.1;       // per RX antenna

  void validate() const {
    for (double v : {p_dac, p_adc, p_ct, p_cr, p_pt, p_pr, p_t, p_r})
      if (!(v > 0.0)) throw std::invalid_argument("PowerModel: all power constants must be > 0");
  }
};

struct ArrayDims {
  int antennas = 1;
  int rf_chains = 1;
  bool phase_shifters = true;  // false for a fully digital array

  void validate() const {
    if (antennas < 1 || rf_chains < 1) throw std::invalid_argument("ArrayDims: counts must be >= 1");
  }
};

/// sum_i per_bit_power * 2^{b_i}
inline double converter_power(const BitVector& bits, double per_bit_power) {
  double total = 0.0;
  for (Eigen::Index i = 0; i < bits.size(); ++i) total += per_bit_power * std::exp2(double(bits[i]));
  return total;
}

/// Same sum from continuous distortions via 2^{b} = sqrt(pi*sqrt(3) / (2 (1 - delta^2))).
template <typename Derived>
typename Derived::Scalar converter_power_of_delta(const Eigen::MatrixBase<Derived>& delta,
                                                  typename Derived::Scalar per_bit_power) {
  using Real = typename Derived::Scalar;
  Real total = 0;
  for (Eigen::Index i = 0; i < delta.size(); ++i) total += per_bit_power * converter_scale<Real>(delta[i]);
  return total;
}

namespace detail {
inline double array_power(const ArrayDims& dims, double per_antenna, double per_shifter, double circuit) {
  dims.validate();
  double p = dims.antennas * per_antenna + circuit;
  if (dims.phase_shifters) p += double(dims.antennas) * dims.rf_chains * per_shifter;
  return p;
}
}  // namespace detail

/// P_TX = tr(F F^H) + P_DT + N_T P_T + N_T L_T P_PT + P_CT with F = F_RF diag(delta) F_BB.
template <typename Real>
Real tx_power(const CMatrix<Real>& f_rf, const RVector<Real>& delta, const CMatrix<Real>& f_bb,
              const PowerModel& model, const ArrayDims& dims) {
  const CMatrix<Real> f = f_rf * delta.asDiagonal() * f_bb;
  return f.squaredNorm() + converter_power_of_delta(delta, Real(model.p_dac)) +
         Real(detail::array_power(dims, model.p_t, model.p_pt, model.p_ct));
}

/// TX power when the converter resolutions are known integers (avoids the delta round trip).
inline double tx_power(double transmit_power, const BitVector& bits, const PowerModel& model, const ArrayDims& dims) {
  return transmit_power + converter_power(bits, model.p_dac) + detail::array_power(dims, model.p_t, model.p_pt, model.p_ct);
}

/// P_RX = P_DR + N_R P_R + N_R L_R P_PR + P_CR.
inline double rx_power(const BitVector& bits, const PowerModel& model, const ArrayDims& dims) {
  return converter_power(bits, model.p_adc) + detail::array_power(dims, model.p_r, model.p_pr, model.p_cr);
}

template <typename Derived>
typename Derived::Scalar rx_power_of_delta(const Eigen::MatrixBase<Derived>& delta, const PowerModel& model,
                                  const ArrayDims& dims) {
  using Real = typename Derived::Scalar;
  return converter_power_of_delta(delta, Real(model.p_adc)) +
         Real(detail::array_power(dims, model.p_r, model.p_pr, model.p_cr));
}

}  // namespace hybridbeam
