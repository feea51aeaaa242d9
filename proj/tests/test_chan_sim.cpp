#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "emdra/chan_sim.hpp"

using namespace emdra;

namespace {
double mean_of(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x;
  return acc / double(v.size());
}
}  // namespace

TEST_CASE("block powers: unit-mean exponential sample mean", "[chan]") {
  auto p = chan::gen_block_rayleigh_powers(1.0, 100000, 1, 5);
  REQUIRE(p.size() == 100000);
  double sigma_mean = 1.0 / std::sqrt(100000.0);
  CHECK(std::abs(mean_of(p) - 1.0) < 3.0 * sigma_mean);
  for (double v : p) REQUIRE(v >= 0.0);
}

TEST_CASE("block powers: fixed blocks are piecewise constant", "[chan]") {
  auto p = chan::gen_block_rayleigh_powers(1.0, 20, 5, 9, chan::BlockLenModel::fixed);
  for (int b = 0; b < 4; ++b)
    for (int k = 1; k < 5; ++k) CHECK(p[5 * b + k] == p[5 * b]);
  CHECK(p[0] != p[5]);
}

TEST_CASE("block powers: exponential variance equals mean squared", "[chan]") {
  auto p = chan::gen_block_rayleigh_powers(2.0, 100000, 1, 13);
  double m = mean_of(p);
  double var = 0.0;
  for (double v : p) var += (v - m) * (v - m);
  var /= double(p.size() - 1);
  CHECK(std::abs(var - 4.0) < 0.05 * 4.0);
}

TEST_CASE("block powers: argument validation", "[chan]") {
  CHECK_THROWS_AS(chan::gen_block_rayleigh_powers(0.0, 10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(chan::gen_block_rayleigh_powers(-1.0, 10, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(chan::gen_block_rayleigh_powers(1.0, 0, 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(chan::gen_block_rayleigh_powers(1.0, 10, 0, 1), std::invalid_argument);
}

TEST_CASE("interference trace: single 0 dB interferer has unit mean", "[chan]") {
  chan::LinkConfig cfg;
  cfg.n_interferers = 1;
  cfg.interferer_mean_inr_db = {0.0};
  cfg.per_interferer_block_len = {1};
  cfg.block_len_model = chan::BlockLenModel::fixed;
  cfg.n_samples = 100000;
  auto tr = chan::gen_interference_trace(cfg);
  double sigma_mean = 1.0 / std::sqrt(100000.0);
  CHECK(std::abs(mean_of(tr.samples) - 1.0) < 3.0 * sigma_mean);
}

TEST_CASE("interference trace: five-interferer mean matches the closed form", "[chan]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 200000;
  cfg.per_interferer_block_len = {1, 1, 1, 1, 1};
  cfg.block_len_model = chan::BlockLenModel::fixed;
  auto tr = chan::gen_interference_trace(cfg);
  double expect = 0.0;
  for (double db : cfg.interferer_mean_inr_db) expect += chan::db_to_linear(db);
  CHECK(std::abs(mean_of(tr.samples) - expect) < 0.05 * expect);
  // per-interferer means converge individually as well
  for (int i = 0; i < cfg.n_interferers; ++i) {
    double want = chan::db_to_linear(cfg.interferer_mean_inr_db[i]);
    CHECK(std::abs(mean_of(tr.per_interferer[i]) - want) < 0.05 * want);
  }
}

TEST_CASE("interference trace: determinism and row-sum identity", "[chan]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 2000;
  auto a = chan::gen_interference_trace(cfg);
  auto b = chan::gen_interference_trace(cfg);
  CHECK(a.samples == b.samples);
  double peak = 0.0;
  for (double v : a.samples) peak = std::max(peak, std::abs(v));
  for (std::size_t t = 0; t < a.samples.size(); ++t) {
    REQUIRE(a.samples[t] >= 0.0);
    double sum = 0.0;
    for (const auto& row : a.per_interferer) sum += row[t];
    REQUIRE(std::abs(a.samples[t] - sum) <= 1e-12 * peak);
  }
  cfg.rng_seed = 2;
  auto c = chan::gen_interference_trace(cfg);
  CHECK(a.samples != c.samples);
}

TEST_CASE("desired trace: constant mode pins S exactly", "[chan]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 100;
  auto tr = chan::gen_desired_trace(cfg);  // 20 dB over unit noise
  for (double v : tr.samples) REQUIRE(v == 100.0);
  cfg.desired_mean_snr_db = 0.0;
  cfg.interferer_mean_inr_db = {-5.0, -5.0, -5.0, -5.0, -5.0};
  auto tr0 = chan::gen_desired_trace(cfg);
  for (double v : tr0.samples) REQUIRE(v == 1.0);
}

TEST_CASE("desired trace: faded mode has the configured mean", "[chan]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 100000;
  cfg.coherence_block_len = 1;
  cfg.block_len_model = chan::BlockLenModel::fixed;
  cfg.faded_desired = true;
  auto tr = chan::gen_desired_trace(cfg);
  CHECK(std::abs(mean_of(tr.samples) - 100.0) < 0.05 * 100.0);
}

TEST_CASE("link config validation", "[chan]") {
  chan::LinkConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  chan::LinkConfig bad = cfg;
  bad.desired_mean_snr_db = 4.0;  // below the 5 dB max INR
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.interferer_mean_inr_db = {0.0};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.per_interferer_block_len = {8, 8};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.n_samples = 1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = cfg;
  bad.noise_power = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
