#include "hybridbeam/config.hpp"

#include <doctest.h>

#include <string>

using namespace hybridbeam;

#ifndef HYBRIDBEAM_CONFIG_DIR
#error "HYBRIDBEAM_CONFIG_DIR must point at the bundled configs"
#endif

namespace {
const std::string kConfigDir = HYBRIDBEAM_CONFIG_DIR;
}

TEST_CASE("minimal config uses defaults") {
  const auto cfg = parse_config("schema_version: 1\n");
  CHECK(cfg.system.nt == 32);
  CHECK(cfg.trials == 200);
  CHECK(cfg.schemes.size() == 1);
  CHECK(cfg.admm.max_iters == 20);
  CHECK(cfg.power.p_dac == 0.1);
}

TEST_CASE("nested fields are read") {
  const auto cfg = parse_config(R"(
schema_version: 1
trials: 7
seed: 18446744073709551615
system: {nt: 16, nr: 4, lt: 3, lr: 2, ns: 2}
channel: {clusters: 3, rays: 2, cluster_power: [1, 2, 3], angular_spread: 0.2}
bits: {min: 2, max: 6}
power: {p_dac: 0.2}
admm: {alpha: 2, max_iters: 5, early_stop: false}
sweep: {mode: zip, snr_db: [0, 5], gamma_t: 0.5}
schemes: [proposed, hybrid_3bit]
bruteforce: {design_iters: 4, max_combos: 1000}
)");
  CHECK(cfg.trials == 7);
  CHECK(cfg.base_seed == 18446744073709551615ULL);
  CHECK(cfg.system.lr == 2);
  CHECK(cfg.clusters.cluster_power.size() == 3);
  CHECK(cfg.admm.range.min_bits == 2);
  CHECK(cfg.admm.range.max_bits == 6);
  CHECK(cfg.power.p_dac == 0.2);
  CHECK(cfg.power.p_adc == 0.1);
  CHECK(cfg.admm.alpha == 2.0);
  CHECK_FALSE(cfg.admm.early_stop);
  CHECK(cfg.sweep.mode == SweepMode::kZip);
  CHECK(cfg.sweep.gamma_t == std::vector<double>{0.5});
  CHECK(cfg.schemes[1] == Scheme{SchemeKind::kHybridFixed, 3});
  CHECK(cfg.bruteforce.design_iters == 4);
}

TEST_CASE("errors name the offending field") {
  CHECK_THROWS_WITH_AS(parse_config("trials: 3\n"), doctest::Contains("schema_version: missing"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 2\n"), doctest::Contains("schema_version"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nsystem: {nt: many}\n"), doctest::Contains("system.nt"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nsystem: {nx: 3}\n"),
                       doctest::Contains("system.nx: unknown field"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\ntrails: 3\n"), doctest::Contains("trails: unknown field"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nschemes: [fancy]\n"), doctest::Contains("unknown scheme 'fancy'"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nschemes: []\n"), doctest::Contains("no schemes enabled"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nsweep: {mode: diagonal}\n"), doctest::Contains("sweep.mode"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nbits: {min: 5, max: 2}\n"), doctest::Contains("bits"),
                       ConfigError);
  CHECK_THROWS_WITH_AS(parse_config("schema_version: 1\nsystem: {ns: 9}\n"), doctest::Contains("ns <= lt"),
                       ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version: [1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config(""), ConfigError);
  CHECK_THROWS_AS(load_config(kConfigDir + "/does_not_exist.cfg"), ConfigError);
}

TEST_CASE("bundled SNR sweep config") {
  const auto cfg = load_config(kConfigDir + "/fig3.cfg");
  const auto pts = expand_sweep(cfg);
  REQUIRE(pts.size() == 7);
  CHECK(pts.front().snr_db == -10.0);
  CHECK(pts.back().snr_db == 20.0);
  CHECK(cfg.schemes.size() == 5);
}

TEST_CASE("bundled trade-off sweep config") {
  const auto cfg = load_config(kConfigDir + "/fig7.cfg");
  const auto pts = expand_sweep(cfg);
  REQUIRE(pts.size() == 3);
  CHECK(pts[0].gamma_t == 0.001);
  CHECK(pts[2].gamma_r == 0.1);
}

TEST_CASE("bundled convergence and brute-force configs") {
  const auto trace = load_config(kConfigDir + "/fig2.cfg");
  const auto pts = expand_sweep(trace);
  REQUIRE(pts.size() == 3);
  CHECK(pts[2].dims.nt == 64);
  const auto toy = load_config(kConfigDir + "/bruteforce_toy.cfg");
  CHECK(toy.system.lt == 2);
  CHECK(toy.admm.range.max_bits == 3);
  CHECK(toy.trials == 50);
}
