#pragma once
#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

// Autoregressive forecaster on a d-times differenced series (the q = 0 path;
// moving-average estimation is out of scope). Coefficients come from ordinary
// least squares over the most recent `window` one-step design rows, each row
// reaching p lags back; window 0 means all available rows.
namespace emdra::forecast {

struct ArimaSpec {
  int p = 30;
  int d = 1;
  int q = 0;
  long window = 0;  // number of most-recent target equations; 0 = unlimited

  void validate() const {
    if (p < 0 || d < 0 || q < 0) throw std::invalid_argument("ArimaSpec: negative order");
    if (q != 0) throw std::invalid_argument("ArimaSpec: MA estimation unsupported (q must be 0)");
    if (window != 0 && window < p + d)
      throw std::invalid_argument("ArimaSpec: finite window must be >= p + d");
  }
};

struct ArimaModel {
  Eigen::VectorXd phi;             // lag coefficients, most recent lag first
  std::vector<double> last_diffs;  // p most recent differenced values, most recent first
  std::vector<double> last_levels; // last value at each differencing level 0..d-1
  bool ridge_fallback = false;     // rank-deficient design, ridge-regularized solve used
};

inline ArimaModel fit_ar(const std::vector<double>& series, const ArimaSpec& spec) {
  spec.validate();
  const long n = static_cast<long>(series.size());
  if (n < spec.p + spec.d + 1)
    throw std::invalid_argument("fit_ar: series shorter than p + d + 1");
  for (double v : series)
    if (!std::isfinite(v)) throw std::invalid_argument("fit_ar: non-finite sample");

  ArimaModel model;
  std::vector<double> dx = series;
  model.last_levels.resize(spec.d);
  for (int k = 0; k < spec.d; ++k) {
    model.last_levels[k] = dx.back();
    for (std::size_t t = 0; t + 1 < dx.size(); ++t) dx[t] = dx[t + 1] - dx[t];
    dx.pop_back();
  }

  const long nd = static_cast<long>(dx.size());
  const long avail = nd - spec.p;
  const long rows = (spec.window > 0) ? std::min<long>(spec.window, avail) : avail;
  const long first = avail - rows;

  if (spec.p == 0) {
    model.phi.resize(0);
  } else {
    Eigen::MatrixXd X(rows, spec.p);
    Eigen::VectorXd y(rows);
    for (long r = 0; r < rows; ++r) {
      long base = first + r;
      for (int j = 0; j < spec.p; ++j) X(r, j) = dx[base + spec.p - 1 - j];
      y(r) = dx[base + spec.p];
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < spec.p) {
      Eigen::MatrixXd G = X.transpose() * X;
      G.diagonal().array() += 1e-8;
      model.phi = G.ldlt().solve(X.transpose() * y);
      model.ridge_fallback = true;
    } else {
      model.phi = qr.solve(y);
    }
  }

  model.last_diffs.resize(spec.p);
  for (int j = 0; j < spec.p; ++j) model.last_diffs[j] = dx[nd - 1 - j];
  return model;
}

// One-step forecast of the differenced series, undifferenced back to level.
inline double predict_one_ar(const ArimaModel& model) {
  double pred = 0.0;
  for (int j = 0; j < model.phi.size(); ++j) pred += model.phi(j) * model.last_diffs[j];
  for (auto it = model.last_levels.rbegin(); it != model.last_levels.rend(); ++it) pred += *it;
  return pred;
}

}  // namespace emdra::forecast
