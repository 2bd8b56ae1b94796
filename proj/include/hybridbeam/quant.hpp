#pragma once

// Additive quantization noise model (AQNM): Q(x) ~ delta * x + eps, with the
// per-chain distortion delta(b) = sqrt(1 - rho(b)), rho(b) = (pi*sqrt(3)/2) 2^{-2b}.

#include "hybridbeam/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace hybridbeam {

template <typename Real>
inline constexpr Real kAqnmConstant = std::numbers::pi_v<Real> * std::numbers::sqrt3_v<Real> / Real(2);

/// rho(b) = (pi*sqrt(3)/2) 2^{-2b}, the relative quantization-noise power at b bits.
template <typename Real>
Real distortion_ratio(Real bits) {
  return kAqnmConstant<Real> * std::exp2(Real(-2) * bits);
}

template <typename Real>
Real delta_of_bits(Real bits) {
  if (!(bits >= Real(1))) throw std::domain_error("delta_of_bits: resolution must be >= 1 bit");
  return std::sqrt(Real(1) - distortion_ratio(bits));
}

struct BitRange {
  int min_bits = 1;
  int max_bits = 8;

  BitRange() = default;
  BitRange(int lo, int hi) : min_bits(lo), max_bits(hi) {
    if (lo < 1 || hi < lo) throw std::invalid_argument("BitRange: need 1 <= min_bits <= max_bits");
  }

  double lower() const { return delta_of_bits<double>(min_bits); }
  double upper() const { return delta_of_bits<double>(max_bits); }
  int count() const { return max_bits - min_bits + 1; }
};

/// Exact inverse of delta_of_bits on [m, M]. Values outside the range are a domain error;
/// a relative slack of a few ulps is accepted at both ends.
template <typename Real>
Real bits_of_delta(Real d, const BitRange& range = {}) {
  const Real lo = Real(range.lower());
  const Real hi = Real(range.upper());
  const Real slack = Real(64) * std::numeric_limits<Real>::epsilon();
  if (!(d >= lo - slack && d <= hi + slack)) throw std::domain_error("bits_of_delta: distortion outside [m, M]");
  return Real(-0.5) * std::log2((Real(1) - d * d) / kAqnmConstant<Real>);
}

/// Converter power multiplier 2^b written in terms of delta: sqrt(pi*sqrt(3) / (2 (1 - delta^2))).
template <typename Real>
Real converter_scale(Real d) {
  if (!(d < Real(1))) throw std::domain_error("converter_scale: distortion must be < 1");
  return std::sqrt(kAqnmConstant<Real> / (Real(1) - d * d));
}

/// d/d(delta) of converter_scale: p(d) * d / (1 - d^2).
template <typename Real>
Real converter_scale_derivative(Real d) {
  return converter_scale(d) * d / (Real(1) - d * d);
}

/// Distortion diagonal for integer resolutions.
template <typename Real = double>
RVector<Real> distortion_of_bits(const BitVector& bits) {
  RVector<Real> d(bits.size());
  for (Eigen::Index i = 0; i < bits.size(); ++i) d[i] = delta_of_bits<Real>(Real(bits[i]));
  return d;
}

/// Nearest-integer resolutions (ties round up), clamped to the range.
template <typename Derived>
BitVector quantize_bits(const Eigen::MatrixBase<Derived>& delta, const BitRange& range = {}) {
  using Real = typename Derived::Scalar;
  BitVector bits(delta.size());
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    const Real b = bits_of_delta<Real>(delta[i], range);
    // the small offset absorbs round-trip error at exact .5 ties
    const int rounded = static_cast<int>(std::floor(b + Real(0.5) + Real(1e-9)));
    bits[i] = std::clamp(rounded, range.min_bits, range.max_bits);
  }
  return bits;
}

/// Diagonal of the quantization-noise covariance C_eps: (1 - rho) rho per chain.
template <typename Real = double>
RVector<Real> noise_cov(const BitVector& bits) {
  RVector<Real> c(bits.size());
  for (Eigen::Index i = 0; i < bits.size(); ++i) {
    if (bits[i] < 1) throw std::domain_error("noise_cov: resolution must be >= 1 bit");
    const Real rho = distortion_ratio<Real>(Real(bits[i]));
    c[i] = (Real(1) - rho) * rho;
  }
  return c;
}

/// Same covariance written from continuous distortions: (1 - rho) rho with rho = 1 - d^2.
template <typename Derived>
auto noise_cov_of_delta(const Eigen::MatrixBase<Derived>& delta) {
  using Real = typename Derived::Scalar;
  RVector<Real> c(delta.size());
  for (Eigen::Index i = 0; i < delta.size(); ++i) {
    const Real rho = Real(1) - delta[i] * delta[i];
    c[i] = (Real(1) - rho) * rho;
  }
  return c;
}

}  // namespace hybridbeam
