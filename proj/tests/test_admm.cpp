#include "hybridbeam/admm.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <numbers>
#include <random>

using namespace hybridbeam;
using oracle::random_complex;
using oracle::random_unit_modulus;

namespace {

struct Planted {
  CMatrixd rf;
  RVectord delta;
  CMatrixd bb;
  CMatrixd target() const { return rf * delta.asDiagonal() * bb; }
};

Planted plant(std::mt19937_64& rng, int n, int l, int ns) {
  const BitRange range;
  return {random_unit_modulus(rng, n, l), oracle::random_box(rng, l, range.lower(), range.upper()),
          random_complex(rng, l, ns)};
}

AdmmState<double> random_state(std::mt19937_64& rng, int n, int l, int ns, double alpha = 1.0) {
  AdmmState<double> s;
  s.alpha = alpha;
  s.rf = random_unit_modulus(rng, n, l);
  s.delta = oracle::random_box(rng, l, BitRange{}.lower(), BitRange{}.upper());
  s.bb = random_complex(rng, l, ns);
  s.z = random_complex(rng, n, ns);
  s.lambda = random_complex(rng, n, ns);
  return s;
}

/// DFT columns: orthogonal with squared norm n.
CMatrixd dft_columns(int n, int l) {
  CMatrixd m(n, l);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < l; ++j) m(i, j) = std::polar(1.0, 2.0 * std::numbers::pi * i * j / n);
  return m;
}


AdmmConfig planted_config(int iters) {
  AdmmConfig cfg;
  cfg.gamma = 0.0;
  cfg.max_iters = iters;
  cfg.tol_rel = 1e-9;
  return cfg;
}

}  // namespace

TEST_CASE("Z update closed form") {
  std::mt19937_64 rng(1);
  SUBCASE("fixed point") {
    auto s = random_state(rng, 8, 3, 2);
    s.lambda.setZero();
    const CMatrixd target = s.product();
    CHECK((update_z(s, target) - target).norm() < 1e-12);
  }
  SUBCASE("small penalty limit") {
    auto s = random_state(rng, 8, 3, 2, 1e-9);
    const CMatrixd target = random_complex(rng, 8, 2);
    CHECK((update_z(s, target) - (target - s.lambda)).norm() < 1e-7);
  }
  SUBCASE("stationarity of the augmented Lagrangian") {
    for (int t = 0; t < 10; ++t) {
      auto s = random_state(rng, 8, 3, 2, 0.5 + t * 0.3);
      const CMatrixd target = random_complex(rng, 8, 2);
      s.z = update_z(s, target);
      const CMatrixd dir = random_complex(rng, 8, 2);
      const double h = 1e-6;
      auto plus = s, minus = s;
      plus.z += h * dir;
      minus.z -= h * dir;
      const double fd = (augmented_lagrangian(plus, target) - augmented_lagrangian(minus, target)) / (2 * h);
      CHECK(std::abs(fd) <= 1e-8);
    }
  }
}

TEST_CASE("unit-modulus projection") {
  CMatrixd a(1, 3);
  a << std::complex<double>(3, 4), 0.0, std::polar(1.0, 0.7);
  const CMatrixd p = project_unit_modulus(a);
  CHECK(std::abs(p(0, 0) - std::complex<double>(0.6, 0.8)) < 1e-15);
  CHECK(p(0, 1) == std::complex<double>(0.0));
  CHECK(std::abs(p(0, 2) - a(0, 2)) < 1e-12);
  std::mt19937_64 rng(2);
  const CMatrixd r = random_complex(rng, 6, 4);
  const CMatrixd once = project_unit_modulus(r);
  CHECK((project_unit_modulus(once) - once).norm() < 1e-12);
  CHECK((once.cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
}

TEST_CASE("RF update") {
  std::mt19937_64 rng(3);
  SUBCASE("identity baseband and full-resolution distortion give the phases of Z") {
    AdmmState<double> s = random_state(rng, 8, 3, 3);
    s.bb = CMatrixd::Identity(3, 3);
    s.delta = RVectord::Constant(3, BitRange{}.upper());
    s.lambda.setZero();
    CHECK((update_rf(s) - project_unit_modulus(CMatrixd(s.z / BitRange{}.upper()))).norm() < 1e-10);
  }
  SUBCASE("unconstrained step solves its normal equations") {
    for (int t = 0; t < 10; ++t) {
      const AdmmState<double> s = random_state(rng, 16, 4, 4, 1.3);
      const CMatrixd x = rf_least_squares(s);
      const CMatrixd db = s.delta.asDiagonal() * s.bb;
      const CMatrixd resid = (x * (s.alpha * db * db.adjoint()) - (s.lambda + s.alpha * s.z) * db.adjoint());
      CHECK(resid.norm() <= 1e-8 * std::max(1.0, x.norm()));
      CHECK((update_rf(s).cwiseAbs().array() - 1.0).abs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("baseband update") {
  std::mt19937_64 rng(4);
  SUBCASE("orthogonal beams") {
    AdmmState<double> s = random_state(rng, 16, 4, 3);
    s.rf = dft_columns(16, 4);
    const double d = 0.9;
    s.delta = RVectord::Constant(4, d);
    s.lambda.setZero();
    CHECK((update_bb(s) - s.rf.adjoint() * s.z / (d * 16.0)).norm() < 1e-10);
  }
  SUBCASE("normal equations") {
    const AdmmState<double> s = random_state(rng, 16, 4, 3, 2.0);
    const CMatrixd bb = update_bb(s);
    const CMatrixd rd = s.rf * s.delta.asDiagonal();
    CHECK((rd.adjoint() * (s.alpha * rd * bb - (s.lambda + s.alpha * s.z))).norm() <= 1e-8 * std::max(1.0, bb.norm()));
  }
  SUBCASE("planted values") {
    const Planted p = plant(rng, 16, 4, 3);
    AdmmState<double> s = random_state(rng, 16, 4, 3);
    s.rf = p.rf;
    s.delta = p.delta;
    s.z = p.target();
    s.lambda.setZero();
    CHECK((update_bb(s) - p.bb).norm() <= 1e-6);
  }
}

TEST_CASE("distortion update recovers a planted diagonal") {
  std::mt19937_64 rng(5);
  for (Side side : {Side::kTx, Side::kRx}) {
    const Planted p = plant(rng, 16, 4, 4);
    AdmmState<double> s = random_state(rng, 16, 4, 4);
    s.rf = p.rf;
    s.bb = p.bb;
    s.z = p.target();
    s.lambda.setZero();
    AdmmConfig cfg;
    cfg.gamma = 0.0;
    const auto box = update_delta(s, side, cfg);
    CHECK((box.delta - p.delta).lpNorm<Eigen::Infinity>() <= 1e-4);
  }
}

TEST_CASE("multiplier update") {
  std::mt19937_64 rng(6);
  auto s = random_state(rng, 8, 3, 2, 0.7);
  SUBCASE("no change at consensus") {
    s.z = s.product();
    CHECK((update_lambda(s) - s.lambda).norm() < 1e-12);
  }
  SUBCASE("one step from zero") {
    s.lambda.setZero();
    CHECK((update_lambda(s) - 0.7 * (s.z - s.product())).norm() < 1e-12);
  }
  SUBCASE("two steps telescope") {
    const CMatrixd l0 = s.lambda;
    const CMatrixd r1 = s.z - s.product();
    s.lambda = update_lambda(s);
    s.z = random_complex(rng, 8, 2);
    const CMatrixd r2 = s.z - s.product();
    s.lambda = update_lambda(s);
    CHECK((s.lambda - (l0 + 0.7 * (r1 + r2))).norm() < 1e-12);
  }
}

TEST_CASE("closed-form blocks minimize the augmented Lagrangian") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 10; ++t) {
    AdmmState<double> s = random_state(rng, 12, 4, 3, 1.0 + t * 0.2);
    const CMatrixd target = random_complex(rng, 12, 3);
    s.z = update_z(s, target);
    const double base_z = augmented_lagrangian(s, target);
    const AdmmState<double> at_z = s;
    s.bb = update_bb(s);
    const double base_bb = augmented_lagrangian(s, target);
    // RF block objective over unconstrained matrices
    const CMatrixd x = rf_least_squares(s);
    auto rf_obj = [&](const CMatrixd& rf) {
      AdmmState<double> c = s;
      c.rf = rf;
      return augmented_lagrangian(c, target);
    };
    const double base_rf = rf_obj(x);
    for (int k = 0; k < 20; ++k) {
      const double eps = 1e-3;
      AdmmState<double> pz = at_z, pb = s;
      pz.z += eps * random_complex(rng, 12, 3);
      pb.bb += eps * random_complex(rng, 4, 3);
      CHECK(augmented_lagrangian(pz, target) >= base_z - 1e-9);
      CHECK(augmented_lagrangian(pb, target) >= base_bb - 1e-9);
      CHECK(rf_obj(x + eps * random_complex(rng, 12, 4)) >= base_rf - 1e-9);
    }
  }
}

TEST_CASE("iterates stay feasible") {
  std::mt19937_64 rng(8);
  const CMatrixd target = random_complex(rng, 32, 5);
  AdmmConfig cfg;
  cfg.gamma = 0.01;
  AdmmState<double> s = initial_state<double>(32, 5, 5, cfg, rng, std::nullopt);
  const BitRange range;
  for (int n = 0; n < 20; ++n) {
    s.z = update_z(s, target);
    s.rf = update_rf(s);
    s.delta = update_delta(s, Side::kTx, cfg).delta;
    s.bb = update_bb(s);
    s.lambda = update_lambda(s);
    REQUIRE((s.rf.cwiseAbs().array() - 1.0).abs().maxCoeff() <= 1e-12);
    REQUIRE((s.delta.array() >= range.lower()).all());
    REQUIRE((s.delta.array() <= range.upper()).all());
  }
}

TEST_CASE("planted factorizations are recovered without the power penalty") {
  std::mt19937_64 rng(9);
  struct Case {
    int n, l, ns;
    Side side;
  };
  for (const Case c : {Case{32, 5, 5, Side::kTx}, Case{8, 2, 2, Side::kRx}, Case{16, 3, 3, Side::kRx}}) {
    const Planted p = plant(rng, c.n, c.l, c.ns);
    std::mt19937_64 design_rng(100 + c.n);
    const auto r = factorize<double>(p.target(), c.l, c.side, planted_config(300), design_rng);
    CHECK(to_db(r.trace.back().nmse) <= -30.0);
  }
}

TEST_CASE("design is deterministic and honours a frozen distortion") {
  std::mt19937_64 rng(10);
  const CMatrixd target = random_complex(rng, 32, 5);
  AdmmConfig cfg;
  cfg.gamma = 0.001;
  std::mt19937_64 a(5), b(5);
  const auto ra = design_tx<double>(target, 5, cfg, a);
  const auto rb = design_tx<double>(target, 5, cfg, b);
  CHECK(ra.factors.rf == rb.factors.rf);
  CHECK(ra.factors.bb == rb.factors.bb);
  CHECK(ra.factors.bits == rb.factors.bits);
  CHECK(ra.trace.size() == rb.trace.size());

  const RVectord frozen = RVectord::Constant(5, delta_of_bits(3.0));
  std::mt19937_64 c(6);
  const auto rf = design_rx<double>(target, 5, cfg, c, frozen);
  CHECK(rf.factors.delta == frozen);
  CHECK((rf.factors.bits.array() == 3).all());
}

TEST_CASE("final distortion comes from integer resolutions") {
  std::mt19937_64 rng(11);
  const CMatrixd target = random_complex(rng, 16, 4);
  AdmmConfig cfg;
  cfg.gamma = 0.01;
  const auto r = design_tx<double>(target, 4, cfg, rng);
  CHECK(r.factors.delta == distortion_of_bits(r.factors.bits));
  CHECK((r.factors.bits.array() >= 1).all());
  CHECK((r.factors.bits.array() <= 8).all());
  CHECK(r.final_nmse == doctest::Approx(nmse<double>(target, r.factors.product())));
}

TEST_CASE("more chains than streams stays finite") {
  std::mt19937_64 rng(12);
  const CMatrixd target = random_complex(rng, 16, 2);
  AdmmConfig cfg;
  cfg.gamma = 0.001;
  const auto r = design_tx<double>(target, 5, cfg, rng);
  CHECK(std::isfinite(r.factors.bb.norm()));
  for (const auto& s : r.trace) CHECK(std::isfinite(s.nmse));
}

TEST_CASE("NMSE decreases in most runs at small penalty") {
  std::mt19937_64 rng(13);
  int monotone = 0;
  const int runs = 50;
  for (int t = 0; t < runs; ++t) {
    const auto ch = draw_channel<double>(rng, ArrayGeometry{32, 0.5}, ArrayGeometry{5, 0.5}, ClusterParams{});
    const auto ref = digital_references(ch, 5, 0.1, 5.0);
    AdmmConfig cfg;
    cfg.gamma = t % 2 ? 0.01 : 0.001;
    const auto r = design_tx<double>(ref.f_dbf, 5, cfg, rng);
    bool ok = true;
    for (std::size_t k = 1; k < r.trace.size(); ++k) ok = ok && r.trace[k].nmse <= r.trace[k - 1].nmse * (1 + 1e-12);
    monotone += ok;
  }
  CHECK(monotone >= int(0.9 * runs));
}

TEST_CASE("effective channel") {
  std::mt19937_64 rng(14);
  const CMatrixd h = random_complex(rng, 5, 8);
  CHECK(effective_channel<double>(h, CMatrixd::Zero(8, 2)).h_tilde.norm() == 0.0);
  const CMatrixd f = random_complex(rng, 5, 2);
  CHECK((effective_channel<double>(CMatrixd::Identity(5, 5), f).h_tilde - f).norm() == 0.0);
  const CMatrixd g = random_complex(rng, 8, 3);
  const auto eff = effective_channel<double>(h, g);
  CHECK(std::abs(eff.h_tilde.norm() - (h * g).norm()) <= 1e-12 * eff.h_tilde.norm());
  const CMatrixd rebuilt = eff.svd.u * eff.svd.s.cast<std::complex<double>>().asDiagonal() * eff.svd.v.adjoint();
  CHECK((rebuilt - eff.h_tilde).norm() <= 1e-10 * eff.h_tilde.norm());
  CHECK_THROWS_AS(effective_channel<double>(h, CMatrixd::Zero(7, 2)), std::invalid_argument);
}

TEST_CASE("digital combiner") {
  std::mt19937_64 rng(15);
  SUBCASE("rank one") {
    const CMatrixd u = random_complex(rng, 5, 1);
    const auto eff = effective_channel<double>(u * random_complex(rng, 1, 3), CMatrixd::Identity(3, 3));
    const CMatrixd w = digital_combiner(eff, 1, 0.1);
    CHECK(std::abs((w.adjoint() * u)(0, 0)) == doctest::Approx(w.norm() * u.norm()));
    CHECK_THROWS_AS(digital_combiner(eff, 2, 0.1), DegenerateError);
    CHECK(active_digital_combiner(eff, 2, 0.1).cols() == 1);
  }
  SUBCASE("equal orthogonal columns share power equally") {
    const CMatrixd q = random_complex(rng, 5, 2).householderQr().householderQ() * CMatrixd::Identity(5, 2);
    const auto eff = effective_channel<double>(q * 2.0, CMatrixd::Identity(2, 2));
    const CMatrixd w = digital_combiner(eff, 2, 0.1);
    CHECK(w.col(0).norm() == doctest::Approx(w.col(1).norm()));
  }
  SUBCASE("random instance has orthogonal columns") {
    const auto eff = effective_channel<double>(random_complex(rng, 5, 32), random_complex(rng, 32, 4));
    const CMatrixd w = digital_combiner(eff, 4, 0.1);
    CMatrixd g = w.adjoint() * w;
    g.diagonal().setZero();
    CHECK(g.norm() <= 1e-10);
  }
  SUBCASE("weak modes are dropped") {
    CMatrixd h = CMatrixd::Zero(3, 3);
    h(0, 0) = 10.0;
    h(1, 1) = 0.01;
    const auto eff = effective_channel<double>(h, CMatrixd::Identity(3, 3));
    CHECK(active_digital_combiner(eff, 2, 1.0).cols() == 1);
  }
}

TEST_CASE("config validation") {
  AdmmConfig cfg;
  cfg.alpha = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = AdmmConfig{};
  cfg.max_iters = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
