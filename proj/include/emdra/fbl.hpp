#pragma once
#include <algorithm>
#include <cmath>
#include <stdexcept>

// Finite-blocklength link math under the normal approximation: capacity,
// dispersion, Gaussian tail quantile, channel-use allocation and achieved
// decode-error evaluation. The O(log2 R) correction is dropped everywhere;
// the closed-form allocation below is the exact algebraic inversion of the
// approximation without that term, so allocation and evaluation are mutual
// inverses up to rounding.
namespace emdra::fbl {

inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

inline double shannon_capacity(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("shannon_capacity: gamma < 0");
  return std::log2(1.0 + gamma);
}

// squared information units per channel use
inline double channel_dispersion(double gamma) {
  if (gamma < 0.0) throw std::invalid_argument("channel_dispersion: gamma < 0");
  double r = 1.0 + gamma;
  return (1.0 - 1.0 / (r * r)) / (kLn2 * kLn2);
}

// Gaussian tail Q(x) = P(Z > x)
inline double q_func(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

namespace detail {
// Acklam's rational approximation to the standard normal quantile,
// |relative error| < 1.15e-9 over the full open interval.
inline double norm_quantile(double p) {
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double plow = 0.02425, phigh = 1.0 - plow;
  double q, r;
  if (p < plow) {
    q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p > phigh) {
    q = std::sqrt(-2.0 * std::log(1.0 - p));
    return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  q = p - 0.5;
  r = q * q;
  return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
         (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}
}  // namespace detail

// Inverse of the Q-function. Rational seed plus two Newton steps against the
// erfc-based Q; the refinement pushes the round-trip error to ~1 ulp of eps.
inline double q_inv(double eps) {
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("q_inv: eps outside (0,1)");
  double x = -detail::norm_quantile(eps);  // Q(x) = eps  <=>  Phi^-1(eps) = -x
  for (int it = 0; it < 2; ++it) {
    double f = q_func(x) - eps;
    double pdf = std::exp(-0.5 * x * x) * 0.3989422804014326779399460599343819;
    if (pdf <= 0.0) break;
    x += f / pdf;
  }
  return x;
}

// Channel uses required for D bits at predicted SINR gamma_hat and target
// error eps. Closed form:
//   R = D/C + (Q^-1(eps)^2 V / 2C^2) [1 + sqrt(1 + 4DC / (Q^-1(eps)^2 V))]
// For eps >= 1/2 the quantile is <= 0 and the dispersion term is taken as 0
// (declared convention: the closed form is derived for eps < 1/2).
inline double required_channel_uses(double payload_bits, double gamma_hat, double eps) {
  if (!(payload_bits >= 1.0)) throw std::invalid_argument("required_channel_uses: D < 1");
  if (!(eps > 0.0) || !(eps < 1.0))
    throw std::invalid_argument("required_channel_uses: eps outside (0,1)");
  if (gamma_hat < 0.0) throw std::invalid_argument("required_channel_uses: gamma_hat < 0");
  double cap = shannon_capacity(gamma_hat);
  if (cap <= 0.0) throw std::domain_error("required_channel_uses: no capacity at gamma_hat = 0");
  double qi = q_inv(eps);
  if (qi <= 0.0) return payload_bits / cap;
  double disp = channel_dispersion(gamma_hat);
  double a = qi * qi * disp;
  return payload_bits / cap +
         a / (2.0 * cap * cap) * (1.0 + std::sqrt(1.0 + 4.0 * payload_bits * cap / a));
}

// Bits deliverable in R channel uses at SINR gamma with error eps; may be
// negative for tiny R, returned as-is (caller clamps).
inline double achievable_bits(double channel_uses, double gamma, double eps) {
  if (!(channel_uses > 0.0)) throw std::invalid_argument("achievable_bits: R <= 0");
  if (!(eps > 0.0) || !(eps < 1.0)) throw std::invalid_argument("achievable_bits: eps outside (0,1)");
  double cap = shannon_capacity(gamma);
  double disp = channel_dispersion(gamma);
  return channel_uses * cap - q_inv(eps) * std::sqrt(channel_uses * disp);
}

// Decode-error probability realized when R channel uses sized for a predicted
// SINR meet the actual SINR gamma. gamma = 0 means no capacity: certain loss.
inline double achieved_error(double channel_uses, double payload_bits, double gamma) {
  if (!(channel_uses > 0.0)) throw std::invalid_argument("achieved_error: R <= 0");
  if (!(payload_bits >= 1.0)) throw std::invalid_argument("achieved_error: D < 1");
  if (gamma < 0.0) throw std::invalid_argument("achieved_error: gamma < 0");
  if (gamma == 0.0) return 1.0;
  double cap = shannon_capacity(gamma);
  double disp = channel_dispersion(gamma);
  double eps = q_func((channel_uses * cap - payload_bits) / std::sqrt(channel_uses * disp));
  return std::clamp(eps, 0.0, 1.0);
}

inline double sinr(double signal_power, double interference_power, double noise_power) {
  if (!(noise_power > 0.0)) throw std::invalid_argument("sinr: noise_power <= 0");
  if (signal_power < 0.0) throw std::invalid_argument("sinr: negative signal power");
  if (interference_power < 0.0) throw std::invalid_argument("sinr: negative interference power");
  return signal_power / (interference_power + noise_power);
}

struct AllocationRecord {
  int t = 0;
  double predicted_interference = 0.0;
  double predicted_sinr = 0.0;
  double channel_uses = 0.0;
  double target_eps = 0.0;
  double actual_interference = 0.0;
  double actual_sinr = 0.0;
  double achieved_eps = 0.0;
};

}  // namespace emdra::fbl
