#include "minmax/numeric.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <cmath>
#include <numbers>

namespace mmh::num {

double log1mexp(double a) {
  if (a > 0.0) return kNaN;
  if (a == 0.0) return -kInf;
  return a > -std::numbers::ln2 ? std::log(-std::expm1(a)) : std::log1p(-std::exp(a));
}

double log_complement_power(double la, double n) {
  if (la == -kInf) return -kInf;
  if (la >= 0.0) return 0.0;
  // (1 - u)^n = 1 - n u + O(u^2); relative correction below 1e-16 here.
  if (la < -700.0 || (la < -40.0 && n * std::exp(la) < 1e-20)) return la + std::log(n);
  return log1mexp(n * log1mexp(la));
}

double log_add(double a, double b) {
  if (a == -kInf) return b;
  if (b == -kInf) return a;
  if (a < b) std::swap(a, b);
  return a + std::log1p(std::exp(b - a));
}

double log_normal_cdf(double z) {
  if (z > 0.0) return std::log1p(-0.5 * std::erfc(z / std::numbers::sqrt2));
  if (z > -37.0) return std::log(0.5 * std::erfc(-z / std::numbers::sqrt2));
  // Asymptotic expansion of the Mills ratio.
  const double w = 1.0 / (z * z);
  const double series =
      1.0 + w * (-1.0 + w * (3.0 + w * (-15.0 + w * (105.0 + w * (-945.0 + w * 10395.0)))));
  return -0.5 * z * z - std::log(-z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

double normal_quantile(double p) {
  if (p <= 0.0) return -kInf;
  if (p >= 1.0) return kInf;
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

double normal_quantile_from_log(double log_p) {
  if (log_p >= 0.0) return kInf;
  if (log_p == -kInf) return -kInf;
  if (log_p > -700.0) {
    const double p = std::exp(log_p);
    if (p < 0.5) return normal_quantile(p);
    // Upper half: use the complement, which is accurate near 1.
    const double q = -std::expm1(log_p);
    return std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * q);
  }
  // Far left tail: Newton on log Phi(z) = log_p.
  const double l = -2.0 * log_p;
  double z = -std::sqrt(l - std::log(l * 2.0 * std::numbers::pi));
  for (int it = 0; it < 50; ++it) {
    const double f = log_normal_cdf(z) - log_p;
    const double log_pdf = -0.5 * z * z - 0.5 * std::log(2.0 * std::numbers::pi);
    const double slope = std::exp(log_pdf - log_normal_cdf(z));
    const double step = f / slope;
    z -= step;
    if (std::abs(step) <= 1e-15 * std::abs(z)) break;
  }
  return z;
}

double normal_upper_quantile_from_log(double log_q) { return -normal_quantile_from_log(log_q); }

std::vector<double> linspace(double lo, double hi, std::size_t count) {
  std::vector<double> out;
  if (count == 0) return out;
  if (count == 1) return {lo};
  out.reserve(count);
  const double step = (hi - lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) out.push_back(lo + step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

std::vector<double> geomspace(double lo, double hi, std::size_t count) {
  auto out = linspace(std::log(lo), std::log(hi), count);
  for (auto& v : out) v = std::exp(v);
  if (!out.empty()) {
    out.front() = lo;
    out.back() = hi;
  }
  return out;
}

}  // namespace mmh::num
