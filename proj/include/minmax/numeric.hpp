#pragma once

#include <cstddef>
#include <limits>
#include <vector>

namespace mmh::num {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// log(1 - e^a) for a <= 0, accurate over the whole range.
double log1mexp(double a);

/// log(1 - (1 - e^la)^n) for real n > 0. Stays accurate when e^la
/// underflows and when the result is close to 0.
double log_complement_power(double la, double n);

/// log(e^a + e^b).
double log_add(double a, double b);

/// log Phi(z) for the standard normal CDF, including the far left tail.
double log_normal_cdf(double z);

/// Standard normal quantile for p in (0,1).
double normal_quantile(double p);

/// Standard normal quantile evaluated from log p (handles p far below 1e-300).
double normal_quantile_from_log(double log_p);

/// Upper-tail normal quantile from log q, i.e. z with log(1 - Phi(z)) = log_q.
double normal_upper_quantile_from_log(double log_q);

/// `count` points evenly spaced on [lo, hi] (count >= 2), or {lo} if count == 1.
std::vector<double> linspace(double lo, double hi, std::size_t count);

/// Geometric grid between lo > 0 and hi.
std::vector<double> geomspace(double lo, double hi, std::size_t count);

}  // namespace mmh::num
