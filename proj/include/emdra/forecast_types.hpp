#pragma once
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace emdra::forecast {

// T = P + M. Built either explicitly or from a training fraction.
struct TrainValSplit {
  long train_len = 0;  // P
  long val_len = 0;    // M
  double train_fraction = 0.8;

  static TrainValSplit from_total(long total, double fraction = 0.8) {
    if (!(fraction > 0.0) || !(fraction < 1.0))
      throw std::invalid_argument("TrainValSplit: fraction outside (0,1)");
    TrainValSplit s;
    s.train_fraction = fraction;
    s.train_len = static_cast<long>(std::llround(fraction * static_cast<double>(total)));
    s.val_len = total - s.train_len;
    if (s.train_len < 1 || s.val_len < 1)
      throw std::invalid_argument("TrainValSplit: degenerate split");
    return s;
  }

  void validate_for(std::size_t total) const {
    if (train_len < 1 || val_len < 1)
      throw std::invalid_argument("TrainValSplit: lengths must be >= 1");
    if (static_cast<std::size_t>(train_len + val_len) != total)
      throw std::invalid_argument("TrainValSplit: P + M != T");
  }
};

enum class Method { AR_DIRECT, AR_EMD, RNN_DIRECT, RNN_EMD, IIR, GENIE };

inline const char* method_name(Method m) {
  switch (m) {
    case Method::AR_DIRECT: return "AR_DIRECT";
    case Method::AR_EMD: return "AR_EMD";
    case Method::RNN_DIRECT: return "RNN_DIRECT";
    case Method::RNN_EMD: return "RNN_EMD";
    case Method::IIR: return "IIR";
    case Method::GENIE: return "GENIE";
  }
  return "?";
}

inline Method method_from_name(const std::string& s) {
  for (Method m : {Method::AR_DIRECT, Method::AR_EMD, Method::RNN_DIRECT, Method::RNN_EMD,
                   Method::IIR, Method::GENIE})
    if (s == method_name(m)) return m;
  throw std::invalid_argument("unknown method: " + s);
}

struct ForecastResult {
  Method method = Method::AR_DIRECT;
  std::vector<double> predictions;  // length M
  double rmse = 0.0;
  // component name -> per-step predictions, in extraction order (EMD methods only)
  std::vector<std::pair<std::string, std::vector<double>>> per_component;
};

inline double rmse(const std::vector<double>& pred, const std::vector<double>& actual) {
  if (pred.size() != actual.size() || pred.empty())
    throw std::invalid_argument("rmse: length mismatch or empty");
  double acc = 0.0;
  for (std::size_t t = 0; t < pred.size(); ++t) {
    double e = pred[t] - actual[t];
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(pred.size()));
}

}  // namespace emdra::forecast
