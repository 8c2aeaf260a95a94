#pragma once

#include <cmath>

namespace proofgauge {

// Two-parameter logistic success probability 1/(1+e^(-a(theta-b))),
// evaluated on the branch that never overflows.
inline double p_2pl(double theta, double a, double b) {
  const double z = a * (theta - b);
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Selection information a^f * P * (1-P). Items with a <= 0 carry no
// information so they are never picked; fractional powers of negative a
// would be undefined anyway.
inline double fisher_info(double theta, double a, double b, double f) {
  if (a <= 0.0) return 0.0;
  const double p = p_2pl(theta, a, b);
  return std::pow(a, f) * p * (1.0 - p);
}

}  // namespace proofgauge
