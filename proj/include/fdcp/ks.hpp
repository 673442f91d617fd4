#pragma once

// Kolmogorov-Smirnov statistics with critical values from the asymptotic
// Kolmogorov distribution. The finite-sample correction is Stephens' (1970):
// the statistic sqrt(ne) * D is replaced by (sqrt(ne) + 0.12 + 0.11 / sqrt(ne)) * D,
// where ne is the sample size (one sample) or nm / (n + m) (two samples).

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "fdcp/errors.hpp"

namespace fdcp::ks {

/// P(K <= x) for the limiting Kolmogorov distribution.
inline double kolmogorov_cdf(double x) {
  if (x <= 0.0) return 0.0;
  if (x < 1.18) {
    // Jacobi-theta form converges fast for small x.
    const double pi = 3.14159265358979323846;
    const double y = -pi * pi / (8.0 * x * x);
    double sum = 0.0;
    for (int k = 1; k <= 9; k += 2) sum += std::exp(k * k * y);
    return std::sqrt(2.0 * pi) / x * sum;
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * x * x);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-17) break;
  }
  return 1.0 - 2.0 * sum;
}

/// Upper alpha-quantile of the Kolmogorov distribution (1.3581 for 5%).
inline double kolmogorov_quantile(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ArgumentError("alpha must lie in (0, 1)");
  double lo = 0.1, hi = 5.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (1.0 - kolmogorov_cdf(mid) > alpha) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

/// Critical value of D at level alpha for effective sample size ne.
inline double critical_value(double alpha, double ne) {
  const double r = std::sqrt(ne);
  return kolmogorov_quantile(alpha) / (r + 0.12 + 0.11 / r);
}

inline double two_sample_critical_value(double alpha, std::size_t n, std::size_t m) {
  const double ne = static_cast<double>(n) * static_cast<double>(m) / static_cast<double>(n + m);
  return critical_value(alpha, ne);
}

/// Asymptotic p-value of an observed D at effective sample size ne.
inline double p_value(double d, double ne) {
  const double r = std::sqrt(ne);
  return 1.0 - kolmogorov_cdf((r + 0.12 + 0.11 / r) * d);
}

/// sup |F_a - F_b| over the pooled sample.
inline double two_sample_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw ArgumentError("KS needs two non-empty samples");
  std::vector<double> x(a.begin(), a.end());
  std::vector<double> y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

/// sup |F_n - F| against a continuous distribution function.
inline double one_sample_statistic(std::span<const double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw ArgumentError("KS needs a non-empty sample");
  std::vector<double> x(sample.begin(), sample.end());
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double f = cdf(x[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace fdcp::ks
