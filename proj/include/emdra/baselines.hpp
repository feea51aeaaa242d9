#pragma once
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "emdra/forecast_types.hpp"

// Comparison predictors: first-order IIR low-pass estimation and the
// genie-aided (perfect-knowledge) estimator.
namespace emdra::baselines {

struct IirParams {
  double alpha = 0.01;  // forgetting factor
  // Estimate seed; NaN means "first observed sample".
  double init_estimate = std::numeric_limits<double>::quiet_NaN();
  // Default updates with the most recent measurement available before the
  // allocation instant (one-step causal). The printed recursion in the source
  // material lags one extra step; that behavior sits behind this flag.
  bool literal_indexing = false;

  void validate() const {
    if (!(alpha > 0.0) || !(alpha < 1.0)) throw std::invalid_argument("IirParams: alpha outside (0,1)");
  }
};

// Runs the filter over the whole trace from init_estimate (warm-up covers the
// training region) and returns the estimates aligned with validation steps
// P..T-1: entry m is the interference estimate available when allocating for
// step P+m.
inline std::vector<double> iir_forecast(const std::vector<double>& trace,
                                        const forecast::TrainValSplit& split,
                                        const IirParams& params) {
  params.validate();
  split.validate_for(trace.size());
  for (double v : trace)
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("iir_forecast: trace must be finite and nonnegative");
  const long P = split.train_len, T = static_cast<long>(trace.size());
  double est = std::isnan(params.init_estimate) ? trace[0] : params.init_estimate;
  std::vector<double> out;
  out.reserve(split.val_len);
  for (long s = 0; s < T; ++s) {
    if (s >= P) out.push_back(est);
    // Measurement folded in once step s has been observed; the literal
    // recursion lags one extra step behind.
    long m = params.literal_indexing ? s - 1 : s;
    if (m >= 0) est = params.alpha * trace[m] + (1.0 - params.alpha) * est;
  }
  return out;
}

// Transmitter that knows the realized interference exactly.
inline std::vector<double> genie_forecast(const std::vector<double>& trace,
                                          const forecast::TrainValSplit& split) {
  split.validate_for(trace.size());
  return std::vector<double>(trace.begin() + split.train_len, trace.end());
}

}  // namespace emdra::baselines
