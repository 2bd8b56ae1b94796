#pragma once

// Diagonal-distortion subproblem of the ADMM factorization:
//
//   min_delta || y - Psi delta ||^2 + gamma * ( w * sum_i p(delta_i) [+ tr(F F^H)] ),
//   m <= delta_i <= M,
//
// where column i of Psi is vec(left_{:,i} right_{i,:}), i.e. the diagonal columns of
// right^T (x) left, and p(d) = 2^{b(d)} is the converter power multiplier.

#include "hybridbeam/quant.hpp"
#include "hybridbeam/types.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

namespace hybridbeam {

template <typename Real>
struct BoxProblem {
  RMatrix<Real> quad_gram;  // Re(Psi^H Psi), L x L, PSD
  CVector<Real> lin;        // Psi^H y
  Real offset = 0;          // ||y||^2
  Real penalty_gamma = 0;
  Real converter_weight = 0;   // per-bit power of the converter penalty
  bool include_trace = false;  // adds gamma * tr(F F^H) = gamma * delta^T G delta (TX only)
  Real lower = 0;
  Real upper = 1;

  Eigen::Index size() const { return quad_gram.rows(); }

  Real objective(const RVector<Real>& d) const {
    const Real quad = d.dot(quad_gram * d);
    Real value = quad - Real(2) * lin.real().dot(d) + offset;
    Real penalty = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) penalty += converter_weight * converter_scale(d[i]);
    if (include_trace) penalty += quad;
    return value + penalty_gamma * penalty;
  }

  RVector<Real> gradient(const RVector<Real>& d) const {
    const Real quad_scale = Real(2) * (Real(1) + (include_trace ? penalty_gamma : Real(0)));
    RVector<Real> g = quad_scale * (quad_gram * d) - Real(2) * lin.real();
    for (Eigen::Index i = 0; i < d.size(); ++i)
      g[i] += penalty_gamma * converter_weight * converter_scale_derivative(d[i]);
    return g;
  }

  /// objective(d + move) - objective(d) without forming either value, so the difference keeps
  /// its precision near the optimum where both values agree to many digits.
  Real objective_change(const RVector<Real>& d, const RVector<Real>& move) const {
    const Real quad_scale = Real(1) + (include_trace ? penalty_gamma : Real(0));
    const RVector<Real> gm = quad_gram * move;
    Real change = quad_scale * (Real(2) * d.dot(gm) + move.dot(gm)) - Real(2) * lin.real().dot(move);
    Real conv = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i)
      if (move[i] != Real(0)) conv += converter_scale(d[i] + move[i]) - converter_scale(d[i]);
    return change + penalty_gamma * converter_weight * conv;
  }

  RVector<Real> project(RVector<Real> d) const { return d.cwiseMax(lower).cwiseMin(upper); }
};

struct BoxPenalty {
  double gamma = 0.0;
  double per_bit_power = 0.1;
  bool include_trace = false;
};

/// Builds the reduced problem for target y = vec(target) and factors left (N x L), right (L x K).
/// Only the L diagonal columns of the Kronecker operator are formed, through their Gram:
/// psi_i^H psi_j = (left_i^H left_j) (right_i . conj . right_j).
template <typename Real>
BoxProblem<Real> reduce_problem(const CMatrix<Real>& target, const CMatrix<Real>& left, const CMatrix<Real>& right,
                                const BoxPenalty& penalty, const BitRange& range) {
  if (left.cols() != right.rows() || left.rows() != target.rows() || right.cols() != target.cols())
    throw std::invalid_argument("reduce_problem: inconsistent factor dimensions");
  BoxProblem<Real> prob;
  const CMatrix<Real> gram = (left.adjoint() * left).cwiseProduct(right.conjugate() * right.transpose());
  prob.quad_gram = gram.real();
  prob.quad_gram = (prob.quad_gram + prob.quad_gram.transpose()).eval() * Real(0.5);
  prob.lin = (left.adjoint() * target * right.adjoint()).diagonal();
  prob.offset = target.squaredNorm();
  prob.penalty_gamma = Real(penalty.gamma);
  prob.converter_weight = Real(penalty.per_bit_power);
  prob.include_trace = penalty.include_trace;
  prob.lower = Real(range.lower());
  prob.upper = Real(range.upper());
  return prob;
}

template <typename Real>
struct BoxSolution {
  RVector<Real> delta;
  Real objective = 0;
  Real stationarity = 0;  // || d - P(d - s0 grad) ||_inf at the reference step s0
  int iterations = 0;
  bool converged = false;
  std::vector<Real> history;  // objective after each accepted step
};

struct BoxSolveOptions {
  double tol = 1e-8;
  int max_iters = 500;
};

namespace detail {

template <typename Real>
Real largest_eigenvalue_psd(const RMatrix<Real>& g) {
  if (g.rows() == 0) return 0;
  RVector<Real> v = RVector<Real>::Ones(g.rows()) / std::sqrt(Real(g.rows()));
  Real lambda = 0;
  for (int k = 0; k < 50; ++k) {
    RVector<Real> w = g * v;
    const Real norm = w.norm();
    if (norm == Real(0)) return 0;
    const Real next = v.dot(w);
    v = w / norm;
    if (std::abs(next - lambda) <= Real(1e-12) * std::abs(next)) return next;
    lambda = next;
  }
  // Power iteration underestimates when it has not converged; pad it.
  return Real(1.01) * lambda;
}

}  // namespace detail

/// Projected gradient with Armijo backtracking. The reference step s0 = 1 / Lip(quadratic part)
/// comes from power iteration on the Gram matrix; accepted steps may grow by 2x per iteration.
template <typename Real>
BoxSolution<Real> solve_box(const BoxProblem<Real>& prob, const BoxSolveOptions& opts = {},
                            std::optional<RVector<Real>> start = std::nullopt) {
  const Eigen::Index n = prob.size();
  RVector<Real> d = start ? prob.project(*start) : RVector<Real>::Constant(n, (prob.lower + prob.upper) / 2);
  const Real quad_scale = Real(2) * (Real(1) + (prob.include_trace ? prob.penalty_gamma : Real(0)));
  const Real lip = quad_scale * detail::largest_eigenvalue_psd(prob.quad_gram);
  const Real step_ref = lip > Real(0) ? Real(1) / lip : Real(1);

  BoxSolution<Real> sol;
  Real f = prob.objective(d);
  Real step = step_ref;
  const Real tol = Real(opts.tol);
  for (int it = 0; it < opts.max_iters; ++it) {
    const RVector<Real> g = prob.gradient(d);
    sol.stationarity = (d - prob.project(d - step_ref * g)).template lpNorm<Eigen::Infinity>();
    if (sol.stationarity <= tol) {
      sol.converged = true;
      break;
    }
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      const RVector<Real> trial = prob.project(d - step * g);
      const RVector<Real> move = trial - d;
      const Real change = prob.objective_change(d, move);
      if (change <= g.dot(move) + move.squaredNorm() / (Real(2) * step)) {
        accepted = true;
        d = trial;
        f += change;
        break;
      }
      step *= Real(0.5);
    }
    ++sol.iterations;
    if (!accepted) break;
    sol.history.push_back(f);
    step *= Real(2);
  }
  if (!sol.converged) {
    const RVector<Real> g = prob.gradient(d);
    sol.stationarity = (d - prob.project(d - step_ref * g)).template lpNorm<Eigen::Infinity>();
    sol.converged = sol.stationarity <= tol;
  }
  sol.delta = d;
  sol.objective = prob.objective(d);
  return sol;
}

}  // namespace hybridbeam
