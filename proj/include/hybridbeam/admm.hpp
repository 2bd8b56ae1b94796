#pragma once

// ADMM factorization of a fully digital beamformer T into RF * diag(delta) * BB with a
// unit-modulus RF factor, box-constrained delta and a converter-power penalty. The same
// machinery serves the precoder (target F_DBF) and the combiner (target W_DBF); the TX
// penalty additionally carries tr(F F^H).

#include "hybridbeam/boxsolve.hpp"
#include "hybridbeam/channel.hpp"
#include "hybridbeam/metrics.hpp"
#include "hybridbeam/quant.hpp"
#include "hybridbeam/types.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <vector>

namespace hybridbeam {

struct AdmmConfig {
  double alpha = 1.0;
  int max_iters = 20;
  double tol_rel = 1e-4;  // eps^z = eps^p = tol_rel * ||T||_F
  bool early_stop = true;
  double gamma = 0.0;
  double per_bit_power = 0.1;
  BitRange range{};
  BoxSolveOptions box{};

  void validate() const {
    if (!(alpha > 0.0)) throw std::invalid_argument("AdmmConfig: alpha must be > 0");
    if (max_iters < 1) throw std::invalid_argument("AdmmConfig: max_iters must be >= 1");
    if (!(tol_rel > 0.0)) throw std::invalid_argument("AdmmConfig: tolerances must be > 0");
    if (!(gamma >= 0.0)) throw std::invalid_argument("AdmmConfig: gamma must be >= 0");
  }
};

struct ResidualSample {
  int iteration = 0;
  double nmse = 0.0;             // ||T - RF D BB||^2 / ||T||^2
  double z_change = 0.0;         // ||Z_n - Z_{n-1}||
  double primal_residual = 0.0;  // ||Z_n - RF D BB||
};

inline double to_db(double x) { return 10.0 * std::log10(x); }

template <typename Real>
struct AdmmState {
  CMatrix<Real> z;
  CMatrix<Real> lambda;
  CMatrix<Real> rf;
  RVector<Real> delta;
  CMatrix<Real> bb;
  Real alpha = 1;
  int n = 0;
  std::vector<ResidualSample> history;

  CMatrix<Real> product() const { return rf * delta.asDiagonal() * bb; }
};

/// Random start: uniform-phase unit-modulus RF, delta uniform on [m, M] (or the frozen value),
/// BB and Z standard complex Gaussian scaled by 1/sqrt(L), Lambda = 0.
template <typename Real, typename Rng>
AdmmState<Real> initial_state(Eigen::Index antennas, Eigen::Index chains, Eigen::Index streams,
                              const AdmmConfig& cfg, Rng& rng, const std::optional<RVector<Real>>& fixed_delta) {
  AdmmState<Real> s;
  s.alpha = Real(cfg.alpha);
  std::uniform_real_distribution<Real> phase(Real(0), Real(2) * std::numbers::pi_v<Real>);
  s.rf.resize(antennas, chains);
  for (Eigen::Index j = 0; j < chains; ++j)
    for (Eigen::Index i = 0; i < antennas; ++i) s.rf(i, j) = std::polar(Real(1), phase(rng));
  if (fixed_delta) {
    if (fixed_delta->size() != chains) throw std::invalid_argument("initial_state: frozen delta has wrong length");
    s.delta = *fixed_delta;
  } else {
    std::uniform_real_distribution<Real> uni(Real(cfg.range.lower()), Real(cfg.range.upper()));
    s.delta.resize(chains);
    for (Eigen::Index i = 0; i < chains; ++i) s.delta[i] = uni(rng);
  }
  const Real scale = Real(1) / std::sqrt(Real(chains));
  auto gaussian = [&](Eigen::Index r, Eigen::Index c) {
    CMatrix<Real> m(r, c);
    for (Eigen::Index j = 0; j < c; ++j)
      for (Eigen::Index i = 0; i < r; ++i) m(i, j) = scale * sample_complex_normal<Real>(rng, Real(1));
    return m;
  };
  s.bb = gaussian(chains, streams);
  s.z = gaussian(antennas, streams);
  s.lambda = CMatrix<Real>::Zero(antennas, streams);
  return s;
}

/// Solves G X = rhs for Hermitian PSD G. When G is numerically singular
/// (lambda_min < 1e-12 lambda_max) it is shifted by 1e-10 tr(G)/L first.
template <typename Real>
CMatrix<Real> solve_gram(CMatrix<Real> g, const CMatrix<Real>& rhs) {
  g = (g + g.adjoint()).eval() * Real(0.5);
  Eigen::SelfAdjointEigenSolver<CMatrix<Real>> es(g, Eigen::EigenvaluesOnly);
  const Real hi = es.eigenvalues().maxCoeff();
  const Real lo = es.eigenvalues().minCoeff();
  if (!(lo >= Real(1e-12) * hi) || !(hi > Real(0))) {
    const Real trace_mean = g.trace().real() / Real(g.rows());
    const Real shift = Real(1e-10) * (trace_mean > Real(0) ? trace_mean : Real(1));
    g.diagonal().array() += shift;
  }
  return g.ldlt().solve(rhs);
}

/// Entrywise phase; exact zeros stay zero.
template <typename Derived>
auto project_unit_modulus(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Scalar::value_type;
  CMatrix<Real> out(a.rows(), a.cols());
  for (Eigen::Index j = 0; j < a.cols(); ++j)
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      const Scalar v = a(i, j);
      const Real mag = std::abs(v);
      out(i, j) = mag == Real(0) ? Scalar(0) : v / mag;
    }
  return out;
}

/// Z_n = (T - Lambda + alpha RF D BB) / (alpha + 1)
template <typename Real>
CMatrix<Real> update_z(const AdmmState<Real>& s, const CMatrix<Real>& target) {
  return (target - s.lambda + s.alpha * s.product()) / (s.alpha + Real(1));
}

/// Unconstrained RF minimizer (Lambda + alpha Z) BB^H D^H (alpha D BB BB^H D^H)^{-1}, before projection.
template <typename Real>
CMatrix<Real> rf_least_squares(const AdmmState<Real>& s) {
  const CMatrix<Real> db = s.delta.asDiagonal() * s.bb;
  const CMatrix<Real> k = s.lambda + s.alpha * s.z;
  const CMatrix<Real> gram = s.alpha * (db * db.adjoint());
  // X G = K (DB)^H  <=>  G X^H = (DB) K^H
  return solve_gram<Real>(gram, db * k.adjoint()).adjoint();
}

template <typename Real>
CMatrix<Real> update_rf(const AdmmState<Real>& s) {
  return project_unit_modulus(rf_least_squares(s));
}

/// BB_n = (alpha D^H RF^H RF D)^{-1} D^H RF^H (Lambda + alpha Z)
template <typename Real>
CMatrix<Real> update_bb(const AdmmState<Real>& s) {
  const CMatrix<Real> rd = s.rf * s.delta.asDiagonal();
  const CMatrix<Real> k = s.lambda + s.alpha * s.z;
  return solve_gram<Real>(s.alpha * (rd.adjoint() * rd), rd.adjoint() * k);
}

/// Lambda_n = Lambda_{n-1} + alpha (Z_n - RF D BB)
template <typename Real>
CMatrix<Real> update_lambda(const AdmmState<Real>& s) {
  return s.lambda + s.alpha * (s.z - s.product());
}

/// Box-constrained distortion step on y = vec(Z + Lambda/alpha) with the current RF and BB.
template <typename Real>
BoxSolution<Real> update_delta(const AdmmState<Real>& s, Side side, const AdmmConfig& cfg) {
  const CMatrix<Real> target = s.z + s.lambda / s.alpha;
  BoxPenalty penalty{cfg.gamma, cfg.per_bit_power, side == Side::kTx};
  const BoxProblem<Real> prob = reduce_problem<Real>(target, s.rf, s.bb, penalty, cfg.range);
  return solve_box(prob, cfg.box, std::optional<RVector<Real>>(s.delta));
}

/// 1/2 ||T - Z||^2 + alpha/2 ||Z + Lambda/alpha - RF D BB||^2 (indicator and penalty terms omitted).
template <typename Real>
Real augmented_lagrangian(const AdmmState<Real>& s, const CMatrix<Real>& target) {
  return Real(0.5) * (target - s.z).squaredNorm() +
         Real(0.5) * s.alpha * (s.z + s.lambda / s.alpha - s.product()).squaredNorm();
}

template <typename Real>
struct AdmmResult {
  HybridFactors<Real> factors;  // delta rebuilt from the rounded bits
  std::vector<ResidualSample> trace;
  int iterations = 0;
  bool converged = false;
  int box_warnings = 0;
  double final_nmse = 0.0;  // after rounding and the baseband refit
};

template <typename Real>
double nmse(const CMatrix<Real>& target, const CMatrix<Real>& approx) {
  const double denom = double(target.squaredNorm());
  return denom > 0.0 ? double((target - approx).squaredNorm()) / denom : double((target - approx).squaredNorm());
}

/// Runs Z -> RF -> delta -> BB -> Lambda until both residuals fall under their tolerances or
/// max_iters is reached. With fixed_delta the distortion step is skipped. On exit delta is
/// rebuilt from the nearest-integer resolutions and BB is refit to the target by least squares.
template <typename Real, typename Rng>
AdmmResult<Real> factorize(const CMatrix<Real>& target, Eigen::Index chains, Side side, const AdmmConfig& cfg,
                           Rng& rng, const std::optional<RVector<Real>>& fixed_delta = std::nullopt) {
  cfg.validate();
  if (chains < 1) throw std::invalid_argument("factorize: need at least one RF chain");
  AdmmState<Real> s = initial_state<Real>(target.rows(), chains, target.cols(), cfg, rng, fixed_delta);
  const Real tol = Real(cfg.tol_rel) * target.norm();

  AdmmResult<Real> out;
  for (s.n = 1; s.n <= cfg.max_iters; ++s.n) {
    const CMatrix<Real> z_prev = s.z;
    s.z = update_z(s, target);
    s.rf = update_rf(s);
    if (!fixed_delta) {
      const BoxSolution<Real> box = update_delta(s, side, cfg);
      if (!box.converged) ++out.box_warnings;
      s.delta = box.delta;
    }
    s.bb = update_bb(s);
    const CMatrix<Real> prod = s.product();
    s.lambda = s.lambda + s.alpha * (s.z - prod);

    ResidualSample r;
    r.iteration = s.n;
    r.nmse = nmse<Real>(target, prod);
    r.z_change = double((s.z - z_prev).norm());
    r.primal_residual = double((s.z - prod).norm());
    out.trace.push_back(r);
    out.iterations = s.n;
    if (cfg.early_stop && r.z_change <= double(tol) && r.primal_residual <= double(tol)) {
      out.converged = true;
      break;
    }
  }

  HybridFactors<Real>& f = out.factors;
  f.rf = s.rf;
  f.bits = quantize_bits(s.delta, cfg.range);
  f.delta = fixed_delta ? *fixed_delta : distortion_of_bits<Real>(f.bits);
  const CMatrix<Real> rd = f.rf * f.delta.asDiagonal();
  f.bb = solve_gram<Real>(rd.adjoint() * rd, rd.adjoint() * target);
  out.final_nmse = nmse<Real>(target, f.product());
  return out;
}

template <typename Real, typename Rng>
AdmmResult<Real> design_tx(const CMatrix<Real>& f_dbf, Eigen::Index rf_chains, const AdmmConfig& cfg, Rng& rng,
                           const std::optional<RVector<Real>>& fixed_delta = std::nullopt) {
  return factorize<Real>(f_dbf, rf_chains, Side::kTx, cfg, rng, fixed_delta);
}

template <typename Real, typename Rng>
AdmmResult<Real> design_rx(const CMatrix<Real>& w_dbf, Eigen::Index rf_chains, const AdmmConfig& cfg, Rng& rng,
                           const std::optional<RVector<Real>>& fixed_delta = std::nullopt) {
  return factorize<Real>(w_dbf, rf_chains, Side::kRx, cfg, rng, fixed_delta);
}

/// H~ = H F* and its SVD.
template <typename Real>
struct EffectiveChannel {
  CMatrix<Real> h_tilde;
  SvdCache<Real> svd;
};

template <typename Real>
EffectiveChannel<Real> effective_channel(const CMatrix<Real>& h, const CMatrix<Real>& f_star) {
  if (h.cols() != f_star.rows()) throw std::invalid_argument("effective_channel: dimension mismatch");
  EffectiveChannel<Real> eff{h * f_star, {}};
  eff.svd = thin_svd(eff.h_tilde);
  return eff;
}

/// W_DBF = U~_{:, 1:N_s} diag(p~)^{1/2} with p~ water-filled over the effective singular values.
template <typename Real>
CMatrix<Real> digital_combiner(const EffectiveChannel<Real>& eff, int num_streams, Real noise_var) {
  if (num_streams < 1) throw std::invalid_argument("digital_combiner: need at least one stream");
  if (num_streams > eff.svd.rank()) throw DegenerateError("digital_combiner: effective channel rank deficient");
  const RVector<Real> p = waterfill(eff.svd.s.head(num_streams), noise_var, Real(num_streams));
  return eff.svd.u.leftCols(num_streams) * p.cwiseSqrt().asDiagonal();
}

/// Combiner restricted to the effective modes the water-filling keeps on (at most max_streams).
/// Columns with zero allocated power would make W^H W singular, so they are not formed.
template <typename Real>
CMatrix<Real> active_digital_combiner(const EffectiveChannel<Real>& eff, int max_streams, Real noise_var) {
  const int usable = int(std::min<Eigen::Index>(max_streams, eff.svd.rank()));
  if (usable < 1) throw DegenerateError("digital_combiner: effective channel is zero");
  const RVector<Real> p = waterfill(eff.svd.s.head(usable), noise_var, Real(max_streams));
  const int active = int((p.array() > Real(0)).count());
  return eff.svd.u.leftCols(active) * p.head(active).cwiseSqrt().asDiagonal();
}

}  // namespace hybridbeam
