#pragma once
// g(alpha, N, gamma) = prod_{s>=0} (1 - (1-alpha)^s gamma)^N, the probability-
// style infinite product controlling how much mass a geometric damping
// schedule can destroy. Continuous and nonincreasing in gamma with g(0) = 1
// and g(1) = 0 (the s = 0 factor vanishes).

#include <cmath>
#include <limits>
#include <string>

#include "herdlab/errors.hpp"

namespace herdlab {

// log g, evaluated as a log1p sum so huge N cannot underflow term-by-term.
// Each |log factor| is at most (gamma/alpha)(1-alpha)^s, so the tail beyond
// term S is bounded by N*gamma*(1-alpha)^{S+1}/alpha^2; truncation stops once
// that bound drops below tol. The log form stays strictly monotone in gamma
// even where g itself underflows to zero.
inline double g_function_log(double alpha, int n, double gamma, double tol = 1e-12) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw InvalidArgument("g_function: alpha must lie in (0,1), got " + std::to_string(alpha));
  if (n < 1) throw InvalidArgument("g_function: N must be a positive integer");
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw InvalidArgument("g_function: gamma must lie in [0,1], got " + std::to_string(gamma));
  if (!(tol > 0.0)) throw InvalidArgument("g_function: tol must be positive");

  if (gamma == 0.0) return 0.0;
  if (gamma == 1.0) return -std::numeric_limits<double>::infinity();

  const double r = 1.0 - alpha;
  const double tail_scale = n * gamma / (alpha * alpha);
  double log_sum = 0.0;
  double pw = 1.0;  // r^s
  for (;;) {
    log_sum += n * std::log1p(-pw * gamma);
    pw *= r;
    if (tail_scale * pw <= tol) break;
  }
  return log_sum;
}

inline double g_function(double alpha, int n, double gamma, double tol = 1e-12) {
  const double log_g = g_function_log(alpha, n, gamma, tol);
  return log_g == 0.0 ? 1.0 : std::exp(log_g);
}

}  // namespace herdlab
