#pragma once
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

// Empirical mode decomposition. Sifting with natural-cubic-spline envelopes,
// mirror boundary extension and the classical SD stopping ratio; an iterate
// is only accepted once it also satisfies the IMF extrema/zero-crossing
// count condition (or the iteration cap is hit).
namespace emdra::emd {

struct SiftParams {
  double sd_threshold = 0.2;
  int max_sift_iters = 100;
  int max_imfs = 12;
  enum class Boundary { mirror } boundary_mode = Boundary::mirror;
  enum class Spline { natural_cubic } spline = Spline::natural_cubic;

  void validate() const {
    if (!(sd_threshold > 0.0)) throw std::invalid_argument("SiftParams: sd_threshold <= 0");
    if (max_sift_iters < 1 || max_imfs < 1)
      throw std::invalid_argument("SiftParams: iteration counts must be >= 1");
  }
};

struct ImfSet {
  std::vector<std::vector<double>> imfs;  // high frequency first
  std::vector<double> residual;
  std::size_t source_len = 0;
};

// Strict interior extrema; a flat plateau reports its midpoint index.
inline std::pair<std::vector<int>, std::vector<int>> find_extrema(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  if (n < 3) throw std::invalid_argument("find_extrema: need length >= 3");
  std::vector<int> maxima, minima;
  int i = 1;
  while (i < n - 1) {
    if (x[i] == x[i + 1] && i + 1 < n - 1) {
      int j = i;
      while (j + 1 < n && x[j + 1] == x[i]) ++j;
      if (j >= n - 1) break;  // plateau runs to the end: no interior extremum
      int mid = (i + j) / 2;
      if (x[i - 1] < x[i] && x[j + 1] < x[i]) maxima.push_back(mid);
      else if (x[i - 1] > x[i] && x[j + 1] > x[i]) minima.push_back(mid);
      i = j + 1;
    } else {
      if (x[i - 1] < x[i] && x[i] > x[i + 1]) maxima.push_back(i);
      else if (x[i - 1] > x[i] && x[i] < x[i + 1]) minima.push_back(i);
      ++i;
    }
  }
  return {maxima, minima};
}

inline int zero_crossings(const std::vector<double>& x) {
  int zc = 0;
  for (std::size_t t = 1; t < x.size(); ++t) {
    double a = x[t - 1], b = x[t];
    double sa = (a > 0.0) - (a < 0.0), sb = (b > 0.0) - (b < 0.0);
    if (sa * sb < 0.0) ++zc;
  }
  return zc;
}

inline bool is_imf(const std::vector<double>& x) {
  auto [mx, mn] = find_extrema(x);
  int n_ext = static_cast<int>(mx.size() + mn.size());
  return std::abs(n_ext - zero_crossings(x)) <= 1;
}

namespace detail {

// Natural cubic spline through strictly increasing knots, evaluated on the
// integer grid 0..n-1. Second-derivative formulation, Thomas solve.
inline std::vector<double> natural_spline_eval(const std::vector<double>& X,
                                               const std::vector<double>& Y, int n) {
  const int m = static_cast<int>(X.size());
  std::vector<double> out(static_cast<std::size_t>(n));
  if (m == 2) {
    for (int t = 0; t < n; ++t)
      out[t] = Y[0] + (Y[1] - Y[0]) * (t - X[0]) / (X[1] - X[0]);
    return out;
  }
  std::vector<double> h(m - 1), diag(m, 2.0), sub(m, 0.0), sup(m, 0.0), rhs(m, 0.0);
  for (int i = 0; i < m - 1; ++i) h[i] = X[i + 1] - X[i];
  // natural ends: M[0] = M[m-1] = 0
  for (int i = 1; i < m - 1; ++i) {
    sub[i] = h[i - 1];
    diag[i] = 2.0 * (h[i - 1] + h[i]);
    sup[i] = h[i];
    rhs[i] = 6.0 * ((Y[i + 1] - Y[i]) / h[i] - (Y[i] - Y[i - 1]) / h[i - 1]);
  }
  std::vector<double> M(m, 0.0), cp(m, 0.0), dp(m, 0.0);
  for (int i = 1; i < m - 1; ++i) {
    double denom = diag[i] - sub[i] * cp[i - 1];
    cp[i] = sup[i] / denom;
    dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / denom;
  }
  for (int i = m - 2; i >= 1; --i) M[i] = dp[i] - cp[i] * M[i + 1];

  int seg = 0;
  for (int t = 0; t < n; ++t) {
    double xt = static_cast<double>(t);
    while (seg < m - 2 && xt > X[seg + 1]) ++seg;
    double hh = h[seg], dl = xt - X[seg], dr = X[seg + 1] - xt;
    out[t] = M[seg] * dr * dr * dr / (6.0 * hh) + M[seg + 1] * dl * dl * dl / (6.0 * hh) +
             (Y[seg] / hh - M[seg] * hh / 6.0) * dr + (Y[seg + 1] / hh - M[seg + 1] * hh / 6.0) * dl;
  }
  return out;
}

// Spline envelope through the given extrema with the two nearest extrema
// mirrored about each endpoint; nullopt when no usable knots remain.
inline std::optional<std::vector<double>> envelope(const std::vector<double>& x,
                                                   const std::vector<int>& idx) {
  const int n = static_cast<int>(x.size());
  if (idx.empty()) return std::nullopt;
  const int k = static_cast<int>(idx.size());
  std::vector<double> X, Y;
  X.reserve(k + 4);
  Y.reserve(k + 4);
  for (int j = std::min(2, k) - 1; j >= 0; --j) {  // left mirror, ascending order
    X.push_back(-static_cast<double>(idx[j]));
    Y.push_back(x[idx[j]]);
  }
  for (int j = 0; j < k; ++j) {
    X.push_back(static_cast<double>(idx[j]));
    Y.push_back(x[idx[j]]);
  }
  for (int j = 0; j < std::min(2, k); ++j) {  // right mirror
    X.push_back(static_cast<double>(2 * (n - 1) - idx[k - 1 - j]));
    Y.push_back(x[idx[k - 1 - j]]);
  }
  std::vector<double> XX, YY;
  XX.reserve(X.size());
  YY.reserve(Y.size());
  for (std::size_t j = 0; j < X.size(); ++j) {  // drop non-increasing duplicates
    if (!XX.empty() && X[j] <= XX.back()) continue;
    XX.push_back(X[j]);
    YY.push_back(Y[j]);
  }
  if (XX.size() < 2) return std::nullopt;
  return natural_spline_eval(XX, YY, n);
}

}  // namespace detail

// Upper/lower spline envelopes; nullopt signals the monotone-residual
// condition (not enough extrema to sift further). The envelopes may cross
// pointwise; that is accepted.
inline std::optional<std::pair<std::vector<double>, std::vector<double>>> envelopes(
    const std::vector<double>& x, const SiftParams& params) {
  params.validate();
  auto [mx, mn] = find_extrema(x);
  auto upper = detail::envelope(x, mx);
  auto lower = detail::envelope(x, mn);
  if (!upper || !lower) return std::nullopt;
  return std::make_pair(std::move(*upper), std::move(*lower));
}

// One sifting pass: h <- h - (upper+lower)/2 until SD < threshold and the
// IMF count condition holds, or the iteration cap. Returns {imf, remainder};
// nullopt when the input is already monotone (no extrema on either side).
inline std::optional<std::pair<std::vector<double>, std::vector<double>>> sift_one_imf(
    const std::vector<double>& x, const SiftParams& params) {
  params.validate();
  std::vector<double> h = x;
  for (int it = 0; it < params.max_sift_iters; ++it) {
    auto env = envelopes(h, params);
    if (!env) {
      if (it == 0) return std::nullopt;
      break;  // extrema exhausted mid-sift: accept the current iterate
    }
    const auto& [up, lo] = *env;
    double num = 0.0, den = 0.0;
    std::vector<double> h2(h.size());
    for (std::size_t t = 0; t < h.size(); ++t) {
      double mean = 0.5 * (up[t] + lo[t]);
      h2[t] = h[t] - mean;
      num += mean * mean;  // (h - h2)^2
      den += h[t] * h[t];
    }
    double sd = num / std::max(den, 1e-300);
    h = std::move(h2);
    if (sd < params.sd_threshold && is_imf(h)) break;
  }
  std::vector<double> rem(x.size());
  for (std::size_t t = 0; t < x.size(); ++t) rem[t] = x[t] - h[t];
  return std::make_pair(std::move(h), std::move(rem));
}

// Full decomposition: extract IMFs until the remainder is monotone (or nearly
// extremum-free) or max_imfs is reached. L is data-dependent. The sifting
// subtractions telescope, so summing IMFs plus residual reproduces the input
// to rounding.
inline ImfSet decompose(const std::vector<double>& signal, const SiftParams& params = {}) {
  params.validate();
  if (signal.size() < 4) throw std::invalid_argument("decompose: need length >= 4");
  ImfSet set;
  set.source_len = signal.size();
  std::vector<double> r = signal;
  auto range = [](const std::vector<double>& x) {
    auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    return *hi - *lo;
  };
  // Leftovers below fp noise are not modes; without this floor the sifter
  // would happily decompose rounding error.
  const double noise_floor = 1e-12 * range(signal);
  while (static_cast<int>(set.imfs.size()) < params.max_imfs) {
    if (range(r) <= noise_floor) break;
    auto [mx, mn] = find_extrema(r);
    if (mx.empty() || mn.empty()) break;
    auto res = sift_one_imf(r, params);
    if (!res) break;
    set.imfs.push_back(std::move(res->first));
    r = std::move(res->second);
  }
  set.residual = std::move(r);
  return set;
}

}  // namespace emdra::emd
