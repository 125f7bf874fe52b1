#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

// Shared helpers for distributional test assertions.

namespace hdit_test {

// One-sample Kolmogorov-Smirnov statistic against a reference CDF.
inline double ks_one_sample(std::vector<double> sample,
                            const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs((i + 1) / n - f));
    d = std::max(d, std::fabs(f - i / n));
  }
  return d;
}

// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j]) {
      ++i;
    } else {
      ++j;
    }
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  return d;
}

// 1% critical value for the two-sample KS statistic.
inline double ks_two_sample_crit_1pct(std::size_t m, std::size_t n) {
  return 1.628 * std::sqrt((static_cast<double>(m) + n) /
                           (static_cast<double>(m) * n));
}

struct RunningStats {
  long n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    const double delta = x - mean;
    mean += delta / n;
    m2 += delta * (x - mean);
  }
  double variance() const { return m2 / (n - 1); }
  double se_of_mean() const { return std::sqrt(variance() / n); }
};

}  // namespace hdit_test
