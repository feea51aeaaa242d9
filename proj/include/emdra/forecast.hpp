#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "emdra/arima.hpp"
#include "emdra/chan_sim.hpp"
#include "emdra/emd.hpp"
#include "emdra/forecast_types.hpp"
#include "emdra/lstm.hpp"
#include "emdra/rng.hpp"

namespace emdra::forecast {

namespace detail {

[[noreturn]] inline void rethrow_at_step(long t, const std::exception& e) {
  throw std::runtime_error("rolling_forecast step " + std::to_string(t) + ": " + e.what());
}

}  // namespace detail

// Rolling one-step forecast, autoregressive path. For each validation step t
// the model is refit on the observed prefix series[0..t) and asked for one
// prediction; the true value then joins the history. Predictions are pure
// functions of past samples.
inline std::vector<double> rolling_forecast(const std::vector<double>& series,
                                            const TrainValSplit& split, const ArimaSpec& spec) {
  split.validate_for(series.size());
  spec.validate();
  const long P = split.train_len, T = P + split.val_len;
  std::vector<double> preds;
  preds.reserve(split.val_len);
  for (long t = P; t < T; ++t) {
    try {
      std::vector<double> hist(series.begin(), series.begin() + t);
      ArimaModel m = fit_ar(hist, spec);
      preds.push_back(predict_one_ar(m));
    } catch (const std::exception& e) {
      detail::rethrow_at_step(t, e);
    }
  }
  return preds;
}

// Rolling one-step forecast, recurrent path. The network is trained on the
// training region, then fine-tuned after each validation step: refit_steps
// optimizer passes over the refit_batch most recent (window -> next) pairs,
// which by then include the freshly observed value.
template <class Scalar = float>
std::vector<double> rolling_forecast(const std::vector<double>& series,
                                     const TrainValSplit& split, const RecurrentSpec& spec,
                                     std::uint64_t seed) {
  split.validate_for(series.size());
  spec.validate();
  const long P = split.train_len, T = P + split.val_len;
  const int W = spec.window;
  using Mat = typename LstmNet<Scalar>::Mat;
  using Vec = typename LstmNet<Scalar>::Vec;

  RnnModel<Scalar> model = [&] {
    try {
      std::vector<double> train(series.begin(), series.begin() + P);
      return train_rnn<Scalar>(train, spec, seed);
    } catch (const std::exception& e) {
      detail::rethrow_at_step(P, e);
    }
  }();

  std::vector<double> preds;
  preds.reserve(split.val_len);
  std::vector<double> hist(series.begin(), series.begin() + P);
  for (long t = P; t < T; ++t) {
    try {
      preds.push_back(predict_one_rnn(model, hist));
      hist.push_back(series[t]);
      if (spec.refit_steps > 0) {
        const long avail = static_cast<long>(hist.size()) - W;
        const long B = std::min<long>(spec.refit_batch, avail);
        Mat X(B, W);
        Vec y(B);
        for (long r = 0; r < B; ++r) {
          const long s0 = static_cast<long>(hist.size()) - W - B + r;
          for (int k = 0; k < W; ++k) X(r, k) = Scalar(model.norm.norm(hist[s0 + k]));
          y(r) = Scalar(model.norm.norm(hist[s0 + W]));
        }
        for (int it = 0; it < spec.refit_steps; ++it) {
          Scalar loss = model.net.train_step(X, y, Scalar(spec.refit_learning_rate));
          if (!std::isfinite(static_cast<double>(loss))) throw TrainingDiverged(-1);
        }
      }
    } catch (const std::exception& e) {
      detail::rethrow_at_step(t, e);
    }
  }
  return preds;
}

// Forecast of the undecomposed total signal.
inline ForecastResult direct_forecast(const chan::InterferenceTrace& trace,
                                      const TrainValSplit& split, Method method,
                                      const ArimaSpec& aspec = {}, const RecurrentSpec& rspec = {},
                                      std::uint64_t seed = 0) {
  ForecastResult res;
  res.method = method;
  if (method == Method::AR_DIRECT)
    res.predictions = rolling_forecast(trace.samples, split, aspec);
  else if (method == Method::RNN_DIRECT)
    res.predictions = rolling_forecast<float>(trace.samples, split, rspec, seed);
  else
    throw std::invalid_argument("direct_forecast: method must be AR_DIRECT or RNN_DIRECT");
  const std::vector<double> actual(trace.samples.begin() + split.train_len, trace.samples.end());
  res.rmse = rmse(res.predictions, actual);
  return res;
}

// Decomposition-based forecast: the full trace is decomposed once, each
// component (IMFs then residual) is rolling-forecast independently, and the
// per-step component predictions are summed into the final prediction.
inline ForecastResult emd_forecast(const chan::InterferenceTrace& trace,
                                   const TrainValSplit& split, Method method,
                                   const emd::SiftParams& sift = {}, const ArimaSpec& aspec = {},
                                   const RecurrentSpec& rspec = {}, std::uint64_t seed = 0) {
  if (method != Method::AR_EMD && method != Method::RNN_EMD)
    throw std::invalid_argument("emd_forecast: method must be AR_EMD or RNN_EMD");
  split.validate_for(trace.samples.size());
  emd::ImfSet dec = emd::decompose(trace.samples, sift);

  std::vector<std::pair<std::string, const std::vector<double>*>> comps;
  for (std::size_t k = 0; k < dec.imfs.size(); ++k)
    comps.emplace_back("imf_" + std::to_string(k + 1), &dec.imfs[k]);
  comps.emplace_back("residual", &dec.residual);

  ForecastResult res;
  res.method = method;
  res.predictions.assign(split.val_len, 0.0);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    std::vector<double> cp;
    if (method == Method::AR_EMD)
      cp = rolling_forecast(*comps[k].second, split, aspec);
    else
      cp = rolling_forecast<float>(*comps[k].second, split, rspec,
                                   rng::derive_stream(seed, static_cast<std::uint64_t>(k)));
    for (long i = 0; i < split.val_len; ++i) res.predictions[i] += cp[i];
    res.per_component.emplace_back(comps[k].first, std::move(cp));
  }
  const std::vector<double> actual(trace.samples.begin() + split.train_len, trace.samples.end());
  res.rmse = rmse(res.predictions, actual);
  return res;
}

}  // namespace emdra::forecast
