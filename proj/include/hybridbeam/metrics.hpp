#pragma once

// Link metrics under the AQNM: noise covariance R_eta, spectral efficiency,
// transmit-side mutual information and energy efficiency.

#include "hybridbeam/quant.hpp"
#include "hybridbeam/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace hybridbeam {

/// One side of a hybrid beamformer, product rf * diag(delta) * bb.
template <typename Real>
struct HybridFactors {
  CMatrix<Real> rf;
  RVector<Real> delta;
  CMatrix<Real> bb;
  BitVector bits;

  CMatrix<Real> product() const { return rf * delta.asDiagonal() * bb; }
};

using HybridPrecoder = HybridFactors<double>;
using HybridCombiner = HybridFactors<double>;

struct LinkMetrics {
  double se = 0.0;     // bits/s/Hz
  double p_tx = 0.0;   // W
  double p_rx = 0.0;   // W
  double power = 0.0;  // W
  double ee = 0.0;     // bits/Hz/J
  double r_eta_cond = 0.0;
};

namespace detail {

/// log2 det of a Hermitian positive-definite matrix through its Cholesky factor.
template <typename Real>
Real log2_det_hpd(const CMatrix<Real>& m, const char* what) {
  Eigen::LLT<CMatrix<Real>> llt(m);
  if (llt.info() != Eigen::Success) throw DegenerateError(what);
  const CVector<Real> diag = llt.matrixLLT().diagonal();
  Real sum = 0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) sum += Real(2) * std::log2(std::abs(diag[i]));
  return sum;
}

/// log2 |I + noise^{-1} signal| with noise Hermitian PD, via a whitened Hermitian form.
template <typename Real>
Real log2_det_whitened(const CMatrix<Real>& noise, const CMatrix<Real>& signal, const char* what) {
  Eigen::LLT<CMatrix<Real>> llt(noise);
  if (llt.info() != Eigen::Success) throw DegenerateError(what);
  // L^{-1} S L^{-H}
  CMatrix<Real> tmp = llt.matrixL().solve(signal);
  CMatrix<Real> whitened = llt.matrixL().solve(tmp.adjoint());
  whitened = (whitened + whitened.adjoint()).eval() * Real(0.5);
  whitened += CMatrix<Real>::Identity(whitened.rows(), whitened.cols());
  return log2_det_hpd<Real>(whitened, what);
}

template <typename Real>
void require_full_column_rank(const CMatrix<Real>& w) {
  const CMatrix<Real> gram = w.adjoint() * w;
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(gram, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const Real largest = ev.size() ? ev.maxCoeff() : Real(0);
  const Real tol = Real(gram.rows()) * std::numeric_limits<Real>::epsilon() * largest;
  if (!(largest > Real(0)) || ev.minCoeff() <= tol) throw DegenerateError("degenerate combiner");
}

}  // namespace detail

/// R_eta = W^H H F_RF C_eT F_RF^H H^H W + W_BB^H C_eR W_BB + noise_var W^H W.
template <typename Real>
CMatrix<Real> r_eta(const CMatrix<Real>& w_rf, const RVector<Real>& delta_rx, const CMatrix<Real>& w_bb,
                    const CMatrix<Real>& f_rf, const RVector<Real>& c_tx, const RVector<Real>& c_rx,
                    const CMatrix<Real>& h, Real noise_var) {
  if (!(noise_var > Real(0))) throw std::invalid_argument("r_eta: noise variance must be > 0");
  const CMatrix<Real> w = w_rf * delta_rx.asDiagonal() * w_bb;
  detail::require_full_column_rank(w);
  const CMatrix<Real> whf = w.adjoint() * h * f_rf;
  CMatrix<Real> r = whf * c_tx.asDiagonal() * whf.adjoint();
  r.noalias() += w_bb.adjoint() * c_rx.asDiagonal() * w_bb;
  r.noalias() += noise_var * (w.adjoint() * w);
  return (r + r.adjoint()) * Real(0.5);
}

template <typename Real>
CMatrix<Real> r_eta(const HybridFactors<Real>& precoder, const HybridFactors<Real>& combiner, const CMatrix<Real>& h,
                    Real noise_var) {
  return r_eta<Real>(combiner.rf, combiner.delta, combiner.bb, precoder.rf, noise_cov_of_delta(precoder.delta),
                     noise_cov_of_delta(combiner.delta), h, noise_var);
}

/// R = log2 |I + R_eta^{-1} W^H H F F^H H^H W / N_s|.
template <typename Real>
Real spectral_efficiency(const HybridFactors<Real>& precoder, const HybridFactors<Real>& combiner,
                         const CMatrix<Real>& h, Real noise_var, int num_streams) {
  const CMatrix<Real> noise = r_eta(precoder, combiner, h, noise_var);
  const CMatrix<Real> g = combiner.product().adjoint() * h * precoder.product();
  const CMatrix<Real> signal = g * g.adjoint() / Real(num_streams);
  return std::max(Real(0), detail::log2_det_whitened<Real>(noise, signal, "degenerate combiner"));
}

/// I = log2 |I + Q^{-1} H F F^H H^H / N_s| with Q = H F_RF C_eT F_RF^H H^H + noise_var I, the
/// covariance of H (F_RF eps_TX) + n seen at the receive antennas.
template <typename Real>
Real mutual_information(const CMatrix<Real>& f_rf, const RVector<Real>& delta_tx, const CMatrix<Real>& f_bb,
                        const CMatrix<Real>& h, const RVector<Real>& c_tx, Real noise_var, int num_streams) {
  if (!(noise_var > Real(0))) throw std::invalid_argument("mutual_information: noise variance must be > 0");
  const CMatrix<Real> hf_rf = h * f_rf;
  CMatrix<Real> q = hf_rf * c_tx.asDiagonal() * hf_rf.adjoint();
  q.diagonal().array() += noise_var;
  q = (q + q.adjoint()).eval() * Real(0.5);
  const CMatrix<Real> hf = hf_rf * delta_tx.asDiagonal() * f_bb;
  const CMatrix<Real> signal = hf * hf.adjoint() / Real(num_streams);
  return std::max(Real(0), detail::log2_det_whitened<Real>(q, signal, "mutual_information: singular noise"));
}

template <typename Real>
Real mutual_information(const HybridFactors<Real>& precoder, const CMatrix<Real>& h, Real noise_var, int num_streams) {
  return mutual_information<Real>(precoder.rf, precoder.delta, precoder.bb, h, noise_cov_of_delta(precoder.delta),
                                  noise_var, num_streams);
}

inline double energy_efficiency(double se, double p_tx, double p_rx) {
  const double p = p_tx + p_rx;
  if (!(p > 0.0)) throw std::invalid_argument("energy_efficiency: total power must be > 0");
  return se / p;
}

/// Ratio of extreme eigenvalues of a Hermitian PD matrix.
template <typename Real>
Real condition_number(const CMatrix<Real>& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

}  // namespace hybridbeam
