#include "hybridbeam/boxsolve.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>

using namespace hybridbeam;
using oracle::kron;
using oracle::random_complex;
using oracle::vec;

namespace {

/// Objective assembled from the full Kronecker operator right^T (x) left acting on vec(diag(d)).
double kron_objective(const CMatrixd& target, const CMatrixd& left, const CMatrixd& right, const RVectord& d,
                      const BoxPenalty& pen) {
  const Eigen::Index l = d.size();
  const CMatrixd psi = kron(right.transpose(), left);
  CMatrixd dm = CMatrixd::Zero(l, l);
  for (Eigen::Index i = 0; i < l; ++i) dm(i, i) = d[i];
  const double fit = (vec(target) - psi * vec(dm)).squaredNorm();
  double penalty = 0.0;
  for (Eigen::Index i = 0; i < l; ++i) penalty += pen.per_bit_power * converter_scale(d[i]);
  if (pen.include_trace) penalty += (left * dm * right).squaredNorm();
  return fit + pen.gamma * penalty;
}

BoxProblem<double> random_problem(std::mt19937_64& rng, int n, int l, int k, const BoxPenalty& pen) {
  return reduce_problem<double>(random_complex(rng, n, k), random_complex(rng, n, l), random_complex(rng, l, k), pen,
                                BitRange{});
}

}  // namespace

TEST_CASE("single variable reduces to a scalar quadratic") {
  std::mt19937_64 rng(1);
  const CMatrixd left = random_complex(rng, 4, 1), right = random_complex(rng, 1, 3), y = random_complex(rng, 4, 3);
  const auto prob = reduce_problem<double>(y, left, right, BoxPenalty{0.0, 0.1, false}, BitRange{});
  const CVectord psi = vec(left * right);
  const double a = psi.squaredNorm();
  const std::complex<double> c = psi.dot(vec(y));
  for (double d : {0.6, 0.8, 0.95}) {
    RVectord v(1);
    v << d;
    CHECK(prob.objective(v) == doctest::Approx(a * d * d - 2.0 * c.real() * d + y.squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("identity factors recover the target diagonal") {
  RVectord d0(3);
  d0 << 0.7, 0.8, 0.9;
  CMatrixd y = CMatrixd::Zero(3, 3);
  for (int i = 0; i < 3; ++i) y(i, i) = d0[i];
  const CMatrixd eye = CMatrixd::Identity(3, 3);
  const auto prob = reduce_problem<double>(y, eye, eye, BoxPenalty{0.0, 0.1, false}, BitRange{});
  CHECK((prob.quad_gram - RMatrixd::Identity(3, 3)).norm() < 1e-15);
  const auto sol = solve_box(prob);
  CHECK(sol.converged);
  CHECK((sol.delta - d0).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("targets above the box clip to the upper bound") {
  const BitRange range;
  CMatrixd y = CMatrixd::Identity(4, 4) * 1.5;
  const CMatrixd eye = CMatrixd::Identity(4, 4);
  const auto sol = solve_box(reduce_problem<double>(y, eye, eye, BoxPenalty{}, range));
  CHECK((sol.delta.array() == range.upper()).all());
}

TEST_CASE("reduced objective matches the full Kronecker operator") {
  std::mt19937_64 rng(2);
  for (const BoxPenalty pen : {BoxPenalty{0.0, 0.1, false}, BoxPenalty{0.05, 0.1, false}, BoxPenalty{0.05, 0.1, true}}) {
    const CMatrixd left = random_complex(rng, 5, 3), right = random_complex(rng, 3, 2), y = random_complex(rng, 5, 2);
    const auto prob = reduce_problem<double>(y, left, right, pen, BitRange{});
    for (int t = 0; t < 10; ++t) {
      const RVectord d = oracle::random_box(rng, 3, prob.lower, prob.upper);
      CHECK(prob.objective(d) == doctest::Approx(kron_objective(y, left, right, d, pen)).epsilon(1e-11));
    }
  }
}

TEST_CASE("reduce_problem checks dimensions") {
  CHECK_THROWS_AS(reduce_problem<double>(CMatrixd::Zero(4, 2), CMatrixd::Zero(4, 3), CMatrixd::Zero(2, 2), BoxPenalty{},
                                         BitRange{}),
                  std::invalid_argument);
}

TEST_CASE("gradient matches central differences") {
  std::mt19937_64 rng(3);
  for (const BoxPenalty pen : {BoxPenalty{0.0, 0.1, false}, BoxPenalty{0.01, 0.1, false}, BoxPenalty{0.5, 0.1, true}}) {
    const auto prob = random_problem(rng, 8, 4, 3, pen);
    for (int t = 0; t < 20; ++t) {
      const RVectord d = oracle::random_box(rng, 4, prob.lower, prob.upper - 1e-4);
      const RVectord g = prob.gradient(d);
      for (int i = 0; i < 4; ++i) {
        const double h = 1e-6 * (1.0 - d[i]);
        RVectord p = d, m = d;
        p[i] += h;
        m[i] -= h;
        const double fd = (prob.objective(p) - prob.objective(m)) / (2.0 * h);
        CHECK(std::abs(g[i] - fd) <= 1e-5 * std::max(1.0, std::abs(fd)));
      }
    }
  }
}

TEST_CASE("objective change agrees with the objective difference") {
  std::mt19937_64 rng(12);
  for (const BoxPenalty pen : {BoxPenalty{0.0, 0.1, false}, BoxPenalty{0.3, 0.1, true}}) {
    const auto prob = random_problem(rng, 8, 4, 3, pen);
    for (int t = 0; t < 10; ++t) {
      const RVectord d = oracle::random_box(rng, 4, prob.lower, prob.upper);
      const RVectord e = oracle::random_box(rng, 4, prob.lower, prob.upper);
      const double diff = prob.objective(e) - prob.objective(d);
      CHECK(prob.objective_change(d, e - d) == doctest::Approx(diff).epsilon(1e-9).scale(prob.offset));
    }
  }
}

TEST_CASE("two-variable solve matches a dense grid search") {
  std::mt19937_64 rng(4);
  for (int inst = 0; inst < 5; ++inst) {
    // random PSD Gram through random factors, converter penalty with gamma = 0.01
    // planted near the middle of the box so the optimum is interior
    const CMatrixd left = random_complex(rng, 6, 2), right = random_complex(rng, 2, 2);
    const RVectord planted = oracle::random_box(rng, 2, 0.7, 0.9);
    const BoxProblem<double> prob = reduce_problem<double>(left * planted.asDiagonal() * right, left, right,
                                                           BoxPenalty{0.01, 0.1, false}, BitRange{});
    const auto sol = solve_box(prob);
    REQUIRE(sol.converged);

    auto grid = [&](double lo0, double hi0, double lo1, double hi1) {
      RVectord best(2), d(2);
      double fbest = std::numeric_limits<double>::infinity();
      for (int i = 0; i < 200; ++i)
        for (int j = 0; j < 200; ++j) {
          d << lo0 + (hi0 - lo0) * i / 199.0, lo1 + (hi1 - lo1) * j / 199.0;
          const double f = prob.objective(d);
          if (f < fbest) {
            fbest = f;
            best = d;
          }
        }
      return best;
    };
    RVectord best = grid(prob.lower, prob.upper, prob.lower, prob.upper);
    const double cell = (prob.upper - prob.lower) / 199.0;
    for (int refine = 0; refine < 2; ++refine) {
      const double w = 2.0 * cell;
      best = grid(std::max(prob.lower, best[0] - w), std::min(prob.upper, best[0] + w),
                  std::max(prob.lower, best[1] - w), std::min(prob.upper, best[1] + w));
    }
    CHECK((sol.delta - best).lpNorm<Eigen::Infinity>() <= 1e-3);
    CHECK(sol.objective <= prob.objective(best) + 1e-9);
  }
}

TEST_CASE("solver stays in the box and never increases the objective") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    const BoxPenalty pen{double(rng() % 3) * 0.05, 0.1, bool(rng() % 2)};
    const auto prob = random_problem(rng, 10, 5, 4, pen);
    const auto sol = solve_box(prob, BoxSolveOptions{}, std::optional<RVectord>(oracle::random_box(rng, 5, prob.lower, prob.upper)));
    CHECK((sol.delta.array() >= prob.lower).all());
    CHECK((sol.delta.array() <= prob.upper).all());
    for (std::size_t k = 1; k < sol.history.size(); ++k) CHECK(sol.history[k] <= sol.history[k - 1]);
    if (sol.converged) CHECK(sol.stationarity <= 1e-8);
  }
}

TEST_CASE("iteration cap returns a flagged in-box iterate") {
  std::mt19937_64 rng(6);
  // planted interior optimum, so two steps cannot reach zero stationarity
  const CMatrixd left = random_complex(rng, 10, 5), right = random_complex(rng, 5, 4);
  const RVectord planted = oracle::random_box(rng, 5, 0.7, 0.9);
  const auto prob = reduce_problem<double>(left * planted.asDiagonal() * right, left, right, BoxPenalty{0.0, 0.1, false},
                                           BitRange{});
  const auto sol = solve_box(prob, BoxSolveOptions{1e-30, 2});
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations <= 2);
  CHECK((sol.delta.array() >= prob.lower).all());
  CHECK((sol.delta.array() <= prob.upper).all());
}

TEST_CASE("solution satisfies box KKT conditions") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 20; ++t) {
    const auto prob = random_problem(rng, 8, 3, 3, BoxPenalty{0.02, 0.1, t % 2 == 0});
    const auto sol = solve_box(prob);
    REQUIRE(sol.converged);
    const RVectord g = prob.gradient(sol.delta);
    const double scale = std::max(1.0, prob.quad_gram.norm());
    for (int i = 0; i < 3; ++i) {
      if (sol.delta[i] <= prob.lower) CHECK(g[i] >= -1e-6 * scale);
      else if (sol.delta[i] >= prob.upper) CHECK(g[i] <= 1e-6 * scale);
      else CHECK(std::abs(g[i]) <= 1e-6 * scale);
    }
  }
}
