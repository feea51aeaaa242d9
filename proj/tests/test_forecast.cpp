#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "emdra/chan_sim.hpp"
#include "emdra/forecast.hpp"

using namespace emdra;

TEST_CASE("split construction and validation", "[forecast]") {
  auto sp = forecast::TrainValSplit::from_total(1000, 0.8);
  CHECK(sp.train_len == 800);
  CHECK(sp.val_len == 200);
  CHECK_NOTHROW(sp.validate_for(1000));
  CHECK_THROWS_AS(sp.validate_for(900), std::invalid_argument);
  forecast::TrainValSplit bad;
  bad.train_len = 10;
  bad.val_len = 0;
  CHECK_THROWS_AS(bad.validate_for(10), std::invalid_argument);
}

TEST_CASE("method names round-trip", "[forecast]") {
  using forecast::Method;
  for (Method m : {Method::AR_DIRECT, Method::AR_EMD, Method::RNN_DIRECT, Method::RNN_EMD,
                   Method::IIR, Method::GENIE})
    CHECK(forecast::method_from_name(forecast::method_name(m)) == m);
  CHECK_THROWS_AS(forecast::method_from_name("kalman"), std::invalid_argument);
}

TEST_CASE("rmse closed forms and properties", "[forecast]") {
  CHECK(forecast::rmse({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}) == 0.0);
  CHECK(forecast::rmse({3.0, 4.0}, {0.0, 0.0}) == Catch::Approx(std::sqrt(12.5)).epsilon(1e-12));
  CHECK_THROWS_AS(forecast::rmse({1.0}, {1.0, 2.0}), std::invalid_argument);
  CHECK_THROWS_AS(forecast::rmse({}, {}), std::invalid_argument);
  // scale equivariance
  std::vector<double> a = {1.0, -2.0, 0.5}, b = {0.3, 1.0, -1.0};
  std::vector<double> a3 = a, b3 = b;
  for (auto& v : a3) v *= 3.0;
  for (auto& v : b3) v *= 3.0;
  CHECK(forecast::rmse(a3, b3) == Catch::Approx(3.0 * forecast::rmse(a, b)).epsilon(1e-12));
}

TEST_CASE("AR rolling forecast: M=1 reduces to one fit-and-predict", "[forecast]") {
  rng::Stream s(21);
  std::vector<double> x(120);
  for (auto& v : x) v = s.uniform();
  forecast::ArimaSpec spec;
  spec.p = 3;
  forecast::TrainValSplit sp;
  sp.train_len = 119;
  sp.val_len = 1;
  auto rolled = forecast::rolling_forecast(x, sp, spec);
  REQUIRE(rolled.size() == 1);
  std::vector<double> train(x.begin(), x.end() - 1);
  auto model = forecast::fit_ar(train, spec);
  CHECK(rolled[0] == forecast::predict_one_ar(model));
}

TEST_CASE("AR rolling forecast beats 1.5x persistence on a random walk", "[forecast]") {
  rng::Stream s(5);
  const int n = 400;
  std::vector<double> x(n);
  x[0] = 0.0;
  for (int t = 1; t < n; ++t) x[t] = x[t - 1] + (s.uniform() - 0.5);
  auto sp = forecast::TrainValSplit::from_total(n, 0.8);
  forecast::ArimaSpec spec;
  spec.p = 3;
  auto preds = forecast::rolling_forecast(x, sp, spec);
  std::vector<double> actual(x.begin() + sp.train_len, x.end());
  std::vector<double> naive(sp.val_len);
  for (long m = 0; m < sp.val_len; ++m) naive[m] = x[sp.train_len + m - 1];
  CHECK(forecast::rmse(preds, actual) <= 1.5 * forecast::rmse(naive, actual));
}

TEST_CASE("AR affine exactness through the rolling loop", "[forecast]") {
  std::vector<double> x(100);
  for (int t = 0; t < 100; ++t) x[t] = 0.75 * t + 2.0;
  auto sp = forecast::TrainValSplit::from_total(100, 0.8);
  forecast::ArimaSpec spec;
  spec.p = 2;
  auto preds = forecast::rolling_forecast(x, sp, spec);
  for (long m = 0; m < sp.val_len; ++m)
    REQUIRE(preds[m] == Catch::Approx(x[sp.train_len + m]).margin(1e-6));
}

TEST_CASE("rolling loop is causal: truncation equivalence", "[forecast]") {
  rng::Stream s(33);
  std::vector<double> x(150);
  for (auto& v : x) v = s.uniform();
  forecast::ArimaSpec spec;
  spec.p = 4;
  forecast::TrainValSplit full;
  full.train_len = 100;
  full.val_len = 50;
  auto preds = forecast::rolling_forecast(x, full, spec);

  const long t = 120;  // check the prediction made at step t
  std::vector<double> trunc(x.begin(), x.begin() + t + 1);
  forecast::TrainValSplit cut;
  cut.train_len = 100;
  cut.val_len = t + 1 - 100;
  auto cut_preds = forecast::rolling_forecast(trunc, cut, spec);
  CHECK(cut_preds[t - 100] == preds[t - 100]);
}

TEST_CASE("RNN rolling forecast is causal and deterministic", "[forecast]") {
  rng::Stream s(8);
  std::vector<double> x(70);
  for (int t = 0; t < 70; ++t) x[t] = std::sin(0.25 * t) + 0.1 * s.uniform();
  forecast::RecurrentSpec spec;
  spec.units = 6;
  spec.window = 5;
  spec.epochs = 5;
  spec.refit_steps = 2;
  spec.refit_batch = 8;
  forecast::TrainValSplit full;
  full.train_len = 50;
  full.val_len = 20;
  auto a = forecast::rolling_forecast<float>(x, full, spec, 4);
  auto b = forecast::rolling_forecast<float>(x, full, spec, 4);
  CHECK(a == b);

  const long t = 60;
  std::vector<double> trunc(x.begin(), x.begin() + t + 1);
  forecast::TrainValSplit cut;
  cut.train_len = 50;
  cut.val_len = t + 1 - 50;
  auto c = forecast::rolling_forecast<float>(trunc, cut, spec, 4);
  for (long m = 0; m < cut.val_len; ++m) REQUIRE(c[m] == a[m]);
}

TEST_CASE("emd_forecast: component-sum identity and per_component layout", "[forecast]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 300;
  cfg.rng_seed = 6;
  auto tr = chan::gen_interference_trace(cfg);
  auto sp = forecast::TrainValSplit::from_total(cfg.n_samples, 0.8);
  forecast::ArimaSpec aspec;
  aspec.p = 5;
  auto res = forecast::emd_forecast(tr, sp, forecast::Method::AR_EMD, {}, aspec);
  REQUIRE(res.method == forecast::Method::AR_EMD);
  REQUIRE(long(res.predictions.size()) == sp.val_len);
  REQUIRE(!res.per_component.empty());
  CHECK(res.per_component.back().first == "residual");
  for (std::size_t k = 0; k + 1 < res.per_component.size(); ++k)
    CHECK(res.per_component[k].first == "imf_" + std::to_string(k + 1));
  double peak = 0.0;
  for (double v : res.predictions) peak = std::max(peak, std::abs(v));
  for (long m = 0; m < sp.val_len; ++m) {
    double sum = 0.0;
    for (const auto& [name, comp] : res.per_component) sum += comp[m];
    REQUIRE(std::abs(sum - res.predictions[m]) <= 1e-12 * std::max(peak, 1.0));
  }
}

TEST_CASE("emd_forecast on a monotone trace equals the direct forecast", "[forecast]") {
  chan::InterferenceTrace tr;
  tr.samples.resize(120);
  for (int t = 0; t < 120; ++t) tr.samples[t] = 0.5 * t + 1.0;
  auto sp = forecast::TrainValSplit::from_total(120, 0.8);
  forecast::ArimaSpec aspec;
  aspec.p = 2;
  auto dec = forecast::emd_forecast(tr, sp, forecast::Method::AR_EMD, {}, aspec);
  auto dir = forecast::direct_forecast(tr, sp, forecast::Method::AR_DIRECT, aspec);
  REQUIRE(dec.predictions.size() == dir.predictions.size());
  for (std::size_t m = 0; m < dec.predictions.size(); ++m)
    CHECK(dec.predictions[m] == Catch::Approx(dir.predictions[m]).margin(1e-9));
  CHECK(dec.per_component.size() == 1);  // residual only
}

TEST_CASE("decomposition improves the AR forecast on a live trace", "[forecast]") {
  chan::LinkConfig cfg;  // defaults: the Table-style link at T = 1000
  auto tr = chan::gen_interference_trace(cfg);
  auto sp = forecast::TrainValSplit::from_total(cfg.n_samples, 0.8);
  auto emd_res = forecast::emd_forecast(tr, sp, forecast::Method::AR_EMD);
  auto dir_res = forecast::direct_forecast(tr, sp, forecast::Method::AR_DIRECT);
  CHECK(emd_res.rmse < dir_res.rmse);
}

TEST_CASE("forecast entry points reject mismatched methods", "[forecast]") {
  chan::LinkConfig cfg;
  cfg.n_samples = 200;
  auto tr = chan::gen_interference_trace(cfg);
  auto sp = forecast::TrainValSplit::from_total(200, 0.8);
  CHECK_THROWS_AS(forecast::direct_forecast(tr, sp, forecast::Method::AR_EMD),
                  std::invalid_argument);
  CHECK_THROWS_AS(forecast::emd_forecast(tr, sp, forecast::Method::IIR), std::invalid_argument);
}
