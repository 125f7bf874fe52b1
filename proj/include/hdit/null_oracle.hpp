#pragma once

#include <cmath>
#include <stdexcept>

#include "hdit/partition.hpp"
#include "hdit/rng.hpp"
#include "hdit/specfun.hpp"

// Ground truth independent of the data pipeline: exact moments of W_n
// through the multivariate gamma function, and the distribution-free
// beta-product sampler for log W_n.

namespace hdit {

// log E(W_n^h) for h > (p-n)/2.
inline double exact_log_moment(const NullLawSpec& spec, double h) {
  const auto& part = spec.partition;
  if (!(h > 0.5 * (part.p - spec.n))) {
    throw std::domain_error("exact_log_moment: need h > (p-n)/2");
  }
  const double half = 0.5 * (spec.n - 1);
  using specfun::multivariate_log_gamma;
  double s = multivariate_log_gamma(part.p, half + h) -
             multivariate_log_gamma(part.p, half);
  for (int qi : part.q) {
    s -= multivariate_log_gamma(qi, half + h) - multivariate_log_gamma(qi, half);
  }
  return s;
}

// One draw of log W_n as sum of log beta((n - q_i* - j)/2, q_i*/2)
// variates, q_i* the cumulative size of the preceding blocks.
inline double sample_log_W(const NullLawSpec& spec, Rng& rng) {
  const auto& part = spec.partition;
  double s = 0.0;
  int q_star = part.q[0];
  for (int i = 1; i < part.k; ++i) {
    for (int j = 1; j <= part.q[i]; ++j) {
      const double a = 0.5 * (spec.n - q_star - j);
      const double b = 0.5 * q_star;
      s += std::log(sample_beta(a, b, rng));
    }
    q_star += part.q[i];
  }
  return s;
}

// A draw of -2 log Lambda_n under the null, without touching data.
inline double sample_neg2_log_lambda(const NullLawSpec& spec, Rng& rng) {
  return -static_cast<double>(spec.n) * sample_log_W(spec, rng);
}

}  // namespace hdit
