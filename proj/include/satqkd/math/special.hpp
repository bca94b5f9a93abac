#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

namespace satqkd::math {

inline double ln_factorial(int n) { return std::lgamma(double(n) + 1.0); }

// Regularized upper incomplete gamma Q(s,x) = Gamma(s,x)/Gamma(s), s > 0,
// x >= 0. Series for the lower function when x < s+1, Lentz continued
// fraction otherwise (the usual split, both converge fast there).
inline double gamma_q(double s, double x) {
  if (s <= 0.0) throw std::invalid_argument("gamma_q: s must be positive");
  if (x < 0.0) throw std::invalid_argument("gamma_q: x must be non-negative");
  if (x == 0.0) return 1.0;

  const double lgs = std::lgamma(s);
  if (x < s + 1.0) {
    // P(s,x) by series, Q = 1 - P
    double term = 1.0 / s;
    double sum = term;
    double ap = s;
    for (int k = 0; k < 500; ++k) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 1e-16) break;
    }
    const double p = sum * std::exp(-x + s * std::log(x) - lgs);
    return 1.0 - p;
  }
  // Q(s,x) by continued fraction (modified Lentz)
  const double tiny = 1e-300;
  double b = x + 1.0 - s;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -double(i) * (double(i) - s);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-x + s * std::log(x) - lgs) * h;
}

// log of the (unregularized) upper incomplete gamma, Gamma(s,x).
inline double ln_gamma_upper(double s, double x) {
  const double q = gamma_q(s, x);
  if (q <= 0.0) return -std::numeric_limits<double>::infinity();
  return std::lgamma(s) + std::log(q);
}

// Exponentially scaled modified Bessel function e^{-x} I_0(x), x >= 0.
// Power series while the scaled sum stays representable, asymptotic
// expansion beyond.
inline double bessel_i0_scaled(double x) {
  if (x < 0.0) throw std::invalid_argument("bessel_i0_scaled: x must be >= 0");
  if (x < 100.0) {
    // all series terms are positive, no cancellation
    double term = 1.0;
    double sum = 1.0;
    const double q = 0.25 * x * x;
    for (int k = 1; k < 200; ++k) {
      term *= q / (double(k) * double(k));
      sum += term;
      if (term < sum * 1e-17) break;
    }
    return std::exp(-x) * sum;
  }
  // I_0(x) ~ e^x/sqrt(2 pi x) * sum_k prod_{j<=k}(2j-1)^2 / (k! (8x)^k)
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k <= 12; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= odd * odd / (double(k) * 8.0 * x);
    sum += term;
    if (term < 1e-17) break;
  }
  return sum / std::sqrt(2.0 * M_PI * x);
}

}  // namespace satqkd::math
