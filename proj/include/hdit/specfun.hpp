#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Scalar special functions used by every centering and calibration:
// log-gamma, digamma, the multivariate log-gamma, chi-square CDF/quantile
// and the standard normal CDF/quantile.

namespace hdit::specfun {

inline double log_gamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("log_gamma: argument must be positive, got " +
                            std::to_string(x));
  }
  return std::lgamma(x);
}

// psi(x) via upward recurrence psi(x) = psi(x+1) - 1/x until x >= 8, then
// the asymptotic series log x - 1/(2x) - sum B_{2k}/(2k x^{2k}) through the
// 1/x^8 term.  Absolute error below 1e-12 on (0, inf).
inline double digamma(double x) {
  if (!(x > 0.0)) {
    throw std::domain_error("digamma: argument must be positive, got " +
                            std::to_string(x));
  }
  double acc = 0.0;
  while (x < 8.0) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv2 = 1.0 / (x * x);
  const double tail =
      inv2 * (1.0 / 12.0 -
              inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 - inv2 / 240.0)));
  return acc + std::log(x) - 0.5 / x - tail;
}

// log Gamma_p(x) = (p(p-1)/4) log pi + sum_{i=1}^p log Gamma(x - (i-1)/2),
// defined for x > (p-1)/2.
inline double multivariate_log_gamma(int dim, double x) {
  if (dim < 1) {
    throw std::domain_error("multivariate_log_gamma: dim must be >= 1");
  }
  if (!(x > 0.5 * (dim - 1))) {
    throw std::domain_error(
        "multivariate_log_gamma: need x > (dim-1)/2, got x=" +
        std::to_string(x) + " dim=" + std::to_string(dim));
  }
  constexpr double kLogPi = 1.1447298858494001741;
  double s = 0.25 * dim * (dim - 1) * kLogPi;
  for (int i = 1; i <= dim; ++i) {
    s += log_gamma(x - 0.5 * (i - 1));
  }
  return s;
}

namespace detail {

// Regularized lower incomplete gamma P(a, x).  Series for x < a+1,
// Lentz continued fraction for Q(a, x) otherwise.
inline double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 2000; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 2000; ++i) {
    const double an = -static_cast<double>(i) * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

inline double regularized_gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_contfrac(a, x);
}

}  // namespace detail

inline double chisq_cdf(double x, double df) {
  if (!(df > 0.0)) {
    throw std::domain_error("chisq_cdf: df must be positive");
  }
  if (x <= 0.0) return 0.0;
  return detail::regularized_gamma_p(0.5 * df, 0.5 * x);
}

// Density of chi-square with df degrees of freedom, in log space.
inline double chisq_pdf(double x, double df) {
  if (!(df > 0.0)) {
    throw std::domain_error("chisq_pdf: df must be positive");
  }
  if (x <= 0.0) return 0.0;
  const double a = 0.5 * df;
  return std::exp((a - 1.0) * std::log(x) - 0.5 * x - a * std::log(2.0) -
                  std::lgamma(a));
}

inline double std_normal_cdf(double x) {
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

inline double std_normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.3989422804014326779;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

// Acklam's rational approximation followed by one Halley refinement
// against the erfc-based CDF.
inline double std_normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::domain_error("std_normal_quantile: p must lie in (0,1)");
  }
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;
  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = std_normal_cdf(x) - p;
  const double u = e / std_normal_pdf(x);
  x -= u / (1.0 + 0.5 * x * u);
  return x;
}

// Bracketed, safeguarded Newton inversion of chisq_cdf in x.
inline double chisq_quantile(double prob, double df) {
  if (!(prob > 0.0 && prob < 1.0)) {
    throw std::domain_error("chisq_quantile: prob must lie in (0,1)");
  }
  if (!(df > 0.0)) {
    throw std::domain_error("chisq_quantile: df must be positive");
  }
  // Wilson-Hilferty starting point.
  const double z = std_normal_quantile(prob);
  const double t = 1.0 - 2.0 / (9.0 * df) + z * std::sqrt(2.0 / (9.0 * df));
  double x = (t > 0.0) ? df * t * t * t : 0.5 * df * std::exp((z - 2.0));
  if (x <= 0.0) x = 1e-8;

  double lo = 0.0;
  double hi = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 200; ++iter) {
    const double f = chisq_cdf(x, df) - prob;
    if (f > 0.0) {
      hi = std::min(hi, x);
    } else {
      lo = std::max(lo, x);
    }
    if (std::fabs(f) < 1e-14) break;
    const double deriv = chisq_pdf(x, df);
    double next = (deriv > 0.0) ? x - f / deriv : -1.0;
    if (!(next > lo && next < hi)) {
      next = std::isinf(hi) ? 2.0 * x : 0.5 * (lo + hi);
    }
    if (std::fabs(next - x) < 1e-14 * (1.0 + std::fabs(x))) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

}  // namespace hdit::specfun
