#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>

#include "hdit/partition.hpp"
#include "hdit/specfun.hpp"

// Purely (n, q_1..q_k)-dependent quantities: classical degrees of freedom
// and Bartlett factor, the exact digamma centering mu_n and variance
// sigma_n^2, their closed-form variants bar_mu_n / tau_n^2, and the
// lemma-level sums Psi and beta_{nr}.

namespace hdit {

// f = (p^2 - sum q_i^2)/2
inline double degrees_f(const GroupPartition& part) {
  double sq = 0.0;
  for (int qi : part.q) sq += static_cast<double>(qi) * qi;
  return 0.5 * (static_cast<double>(part.p) * part.p - sq);
}

inline double bartlett_rho(const NullLawSpec& spec) {
  const auto& part = spec.partition;
  double s2 = 0.0, s3 = 0.0;
  for (int qi : part.q) {
    const double q = qi;
    s2 += q * q;
    s3 += q * q * q;
  }
  const double p = part.p;
  const double d2 = p * p - s2;
  const double d3 = p * p * p - s3;
  return 1.0 - (2.0 * d3 + 9.0 * d2) / (6.0 * spec.n * d2);
}

// Delta_{g,n,q}(t) = sum_{i=1}^q g((n-i)/2 + t)
template <class G>
double delta_sum(G&& g, int n, int q, double t) {
  if (q < 1 || q >= n) {
    throw std::domain_error("delta_sum: need 1 <= q < n");
  }
  if (!(t > -0.5 * (n - q))) {
    throw std::domain_error("delta_sum: need t > -(n-q)/2");
  }
  double s = 0.0;
  for (int i = 1; i <= q; ++i) {
    const double arg = 0.5 * (n - i) + t;
    if (!(arg > 0.0)) {
      throw std::domain_error("delta_sum: non-positive argument to g");
    }
    s += g(arg);
  }
  return s;
}

// Psi_{g,n,p}(x) = Delta_{g,n,p}(x) - sum_i Delta_{g,n,q_i}(x)
template <class G>
double psi_functional(G&& g, const NullLawSpec& spec, double x) {
  const auto& part = spec.partition;
  double s = delta_sum(g, spec.n, part.p, x);
  for (int qi : part.q) {
    s -= delta_sum(g, spec.n, qi, x);
  }
  return s;
}

// beta_{nr}(x) = Psi with g(y)=1/y^r; nonnegative for all valid inputs.
inline double beta_nr(const NullLawSpec& spec, int order, double x) {
  if (order < 1) {
    throw std::domain_error("beta_nr: order must be >= 1");
  }
  return psi_functional(
      [order](double y) { return std::pow(y, -order); }, spec, x);
}

// b(n,q) = sum_{j=1}^q (n-j)^{-2}
inline double b_count(int n, int q) {
  if (q < 1 || q >= n) {
    throw std::domain_error("b_count: need 1 <= q < n");
  }
  double s = 0.0;
  for (int j = 1; j <= q; ++j) {
    const double d = n - j;
    s += 1.0 / (d * d);
  }
  return s;
}

// mu_n = -n * Psi_{psi,n,p}(0)
inline double mu_n(const NullLawSpec& spec) {
  return -spec.n *
         psi_functional([](double y) { return specfun::digamma(y); }, spec,
                        0.0);
}

// bar_sigma_n^2 = 2n^2 (sum_{j<=p} 1/(n-j) - sum_i sum_{j<=q_i} 1/(n-j))
inline double bar_sigma2_n(const NullLawSpec& spec) {
  const int n = spec.n;
  const auto& part = spec.partition;
  auto harm = [n](int q) {
    double s = 0.0;
    for (int j = 1; j <= q; ++j) s += 1.0 / (n - j);
    return s;
  };
  double s = harm(part.p);
  for (int qi : part.q) s -= harm(qi);
  return 2.0 * static_cast<double>(n) * n * s;
}

// sigma_n^2 = bar_sigma_n^2 + 2n^2 (b(n,p) - sum_i b(n,q_i))
inline double sigma2_n(const NullLawSpec& spec) {
  const int n = spec.n;
  const auto& part = spec.partition;
  double bb = b_count(n, part.p);
  for (int qi : part.q) bb -= b_count(n, qi);
  return bar_sigma2_n(spec) + 2.0 * static_cast<double>(n) * n * bb;
}

// Closed-form centering of the Qi-Wang-Zhang normal limit.
inline double bar_mu_n(const NullLawSpec& spec) {
  const double n = spec.n;
  const auto& part = spec.partition;
  if (part.p >= spec.n) {
    throw std::domain_error("bar_mu_n: requires p < n");
  }
  double s = 0.0;
  for (int qi : part.q) {
    s += (qi - n + 1.5) * std::log1p(-qi / n);
  }
  s -= (part.p - n + 1.5) * std::log1p(-part.p / n);
  double bb = b_count(spec.n, part.p);
  for (int qi : part.q) bb -= b_count(spec.n, qi);
  return n * s + (n / 3.0) * bb;
}

inline double tau2_n(const NullLawSpec& spec) {
  const double n = spec.n;
  const auto& part = spec.partition;
  if (part.p >= spec.n) {
    throw std::domain_error("tau2_n: requires p < n");
  }
  double s = -std::log1p(-part.p / n);
  for (int qi : part.q) {
    s += std::log1p(-qi / n);
  }
  double bb = b_count(spec.n, part.p);
  for (int qi : part.q) bb -= b_count(spec.n, qi);
  return 2.0 * n * n * (s + bb);
}

}  // namespace hdit
