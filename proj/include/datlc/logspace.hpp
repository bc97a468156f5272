#pragma once

/**
 * Log-space arithmetic shared by every decoder and kernel.
 *
 * Probabilities are stored as natural logs; probability zero is -infinity.
 * The two rules everything relies on:
 *   x + (-inf)        == -inf   (multiplying by probability zero)
 *   logsumexp(-inf,y) == y      (adding probability zero)
 */

#include <cmath>
#include <limits>
#include <span>

namespace datlc {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

/// Stable log(sum(exp(v))) over a span. Empty or all -inf input yields -inf.
inline double logsumexp(std::span<const double> values) {
  double max = kNegInf;
  for (double v : values) {
    if (v > max) max = v;
  }
  if (max == kNegInf) return kNegInf;
  double sum = 0.0;
  for (double v : values) {
    sum += std::exp(v - max);
  }
  return max + std::log(sum);
}

/// Two-term form: log(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == kNegInf) return kNegInf;  // both zero mass
  return a + std::log1p(std::exp(b - a));
}

}  // namespace datlc
