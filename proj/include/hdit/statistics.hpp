#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "hdit/centering.hpp"
#include "hdit/limit_dists.hpp"
#include "hdit/lrt.hpp"
#include "hdit/partition.hpp"
#include "hdit/specfun.hpp"

// Calibrated decision statistics.  All tests reject in the upper tail:
// -2 log Lambda_n is stochastically larger under dependence, and the
// trace tests reject for T > z_alpha.

namespace hdit {

struct DegenerateError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class StatName {
  bartlett,
  clt_T0,
  clt_T1,
  alrt_Zn,
  logchi,
  trace_T2,
  trace_T3,
};

inline const char* stat_name_str(StatName name) {
  switch (name) {
    case StatName::bartlett: return "bartlett";
    case StatName::clt_T0: return "clt_T0";
    case StatName::clt_T1: return "clt_T1";
    case StatName::alrt_Zn: return "alrt_Zn";
    case StatName::logchi: return "logchi";
    case StatName::trace_T2: return "trace_T2";
    case StatName::trace_T3: return "trace_T3";
  }
  return "?";
}

struct ReferenceLaw {
  enum class Kind { chi_sq, std_normal, log_chi } kind;
  double df = 0.0;  // chi_sq
  int r = 0, v = 0;  // log_chi

  static ReferenceLaw chi_sq(double degrees) {
    return {Kind::chi_sq, degrees, 0, 0};
  }
  static ReferenceLaw std_normal() { return {Kind::std_normal, 0.0, 0, 0}; }
  static ReferenceLaw log_chi(int r, int v) {
    return {Kind::log_chi, 0.0, r, v};
  }

  nlohmann::json to_json() const {
    switch (kind) {
      case Kind::chi_sq:
        return {{"type", "chi_sq"}, {"df", df}};
      case Kind::std_normal:
        return {{"type", "std_normal"}};
      case Kind::log_chi:
        return {{"type", "log_chi"}, {"r", r}, {"v", v}};
    }
    return nullptr;
  }
};

struct StatisticReport {
  StatName name;
  double value;
  ReferenceLaw reference_law;
  double p_value;
  std::string warning;  // empty unless a regime note applies

  bool reject_at(double alpha) const { return p_value < alpha; }

  nlohmann::json to_json() const {
    nlohmann::json j = {{"name", stat_name_str(name)},
                        {"value", value},
                        {"reference_law", reference_law.to_json()},
                        {"p_value", p_value}};
    if (!warning.empty()) j["warning"] = warning;
    return j;
  }
};

// -2 rho_n log Lambda_n against chi-square with f degrees of freedom.
inline StatisticReport bartlett_test(double stat, const NullLawSpec& spec) {
  const double f = degrees_f(spec.partition);
  const double value = bartlett_rho(spec) * stat;
  return {StatName::bartlett, value, ReferenceLaw::chi_sq(f),
          1.0 - specfun::chisq_cdf(value, f), {}};
}

inline StatisticReport clt_T0(double stat, const NullLawSpec& spec) {
  const double value = (stat - mu_n(spec)) / std::sqrt(sigma2_n(spec));
  return {StatName::clt_T0, value, ReferenceLaw::std_normal(),
          1.0 - specfun::std_normal_cdf(value), {}};
}

inline StatisticReport clt_T1(double stat, const NullLawSpec& spec) {
  const double value = (stat - bar_mu_n(spec)) / std::sqrt(tau2_n(spec));
  return {StatName::clt_T1, value, ReferenceLaw::std_normal(),
          1.0 - specfun::std_normal_cdf(value), {}};
}

// Z_n = stat sqrt(2 f_n / sigma_n^2) + f_n - mu_n sqrt(2 f_n / sigma_n^2)
inline StatisticReport alrt_Zn(double stat, const NullLawSpec& spec) {
  const double f = degrees_f(spec.partition);
  const double slope = std::sqrt(2.0 * f / sigma2_n(spec));
  const double value = stat * slope + f - mu_n(spec) * slope;
  return {StatName::alrt_Zn, value, ReferenceLaw::chi_sq(f),
          1.0 - specfun::chisq_cdf(value, f), {}};
}

// Boundary regime: (stat - r n log n)/n against the law of
// -sum_{j=v}^{r+v-1} log Y_j.
inline StatisticReport logchi_test(double stat, const NullLawSpec& spec) {
  const int r = spec.partition.r_gap;
  const int v = spec.n - spec.partition.p;
  const double n = spec.n;
  const double value = (stat - r * n * std::log(n)) / n;
  const LogChiLimit law(r, v);
  StatisticReport rep{StatName::logchi, value, ReferenceLaw::log_chi(r, v),
                      1.0 - logchi_cdf(law, value), {}};
  if (r + v > 30) {
    rep.warning = "r_gap + v > 30: boundary limit likely unsuitable";
  }
  return rep;
}

namespace detail {

struct TraceCoeffs {
  double a_n;
  double b_n;
};

// Closed forms a_n = q1 q2/(n-1), b_n = 2 q1 q2 (n-1-q1)(n-1-q2)/(n-1)^4,
// cross-checked against the ratio form built from r_n1 = q2/q1 and
// r_n2 = q2/(n-1-q1).
inline TraceCoeffs trace_t2_coeffs(int q1, int q2, int n) {
  const double nn = n - 1.0;
  const double a_closed = q1 * q2 / nn;
  const double b_closed =
      2.0 * q1 * q2 * (nn - q1) * (nn - q2) / (nn * nn * nn * nn);
  const double r1 = static_cast<double>(q2) / q1;
  const double r2 = q2 / (nn - q1);
  const double h2 = r1 + r2 - r1 * r2;
  const double a_ratio = q2 * r2 / (r1 + r2);
  const double sum2 = (r1 + r2) * (r1 + r2);
  const double b_ratio = 2.0 * h2 * r1 * r1 * r2 * r2 / (sum2 * sum2);
  if (std::fabs(a_closed - a_ratio) > 1e-9 * (1.0 + std::fabs(a_closed)) ||
      std::fabs(b_closed - b_ratio) > 1e-9 * (1.0 + std::fabs(b_closed))) {
    throw std::logic_error("trace_T2: centering formulas disagree");
  }
  return {a_closed, b_closed};
}

}  // namespace detail

// Trace criterion L_n = tr(A21 A11^{-1} A12 A22^{-1}), standardized.
inline StatisticReport trace_T2(const Matrix& a, const NullLawSpec& spec) {
  const auto& part = spec.partition;
  if (part.k != 2) {
    throw PartitionError("trace_T2 requires exactly two blocks");
  }
  const int q1 = part.q[0];
  const int q2 = part.q[1];
  const auto a11 = a.block(0, 0, q1, q1);
  const auto a12 = a.block(0, q1, q1, q2);
  const auto a21 = a.block(q1, 0, q2, q1);
  const auto a22 = a.block(q1, q1, q2, q2);
  Eigen::LLT<Matrix> llt11(a11);
  if (llt11.info() != Eigen::Success) {
    throw FactorizationError("trace_T2: block A11 not positive definite");
  }
  Eigen::LLT<Matrix> llt22(a22);
  if (llt22.info() != Eigen::Success) {
    throw FactorizationError("trace_T2: block A22 not positive definite");
  }
  const Matrix m = llt11.solve(a12);   // A11^{-1} A12
  const Matrix nmat = llt22.solve(a21);  // A22^{-1} A21
  const double ln = (nmat * m).trace();
  const auto coeffs = detail::trace_t2_coeffs(q1, q2, spec.n);
  const double value = (ln - coeffs.a_n) / std::sqrt(coeffs.b_n);
  return {StatName::trace_T2, value, ReferenceLaw::std_normal(),
          1.0 - specfun::std_normal_cdf(value), {}};
}

// Li et al. trace criterion from the gamma_ij cross-moments.
inline StatisticReport trace_T3(const Matrix& a, const NullLawSpec& spec) {
  const auto& part = spec.partition;
  if (part.k != 2) {
    throw PartitionError("trace_T3 requires exactly two blocks");
  }
  if (spec.n < 3) {
    throw PartitionError("trace_T3 requires n >= 3");
  }
  const int q1 = part.q[0];
  const int q2 = part.q[1];
  const double n = spec.n;
  const double denom = (n - 2.0) * (n + 1.0);
  const auto a11 = a.block(0, 0, q1, q1);
  const auto a12 = a.block(0, q1, q1, q2);
  const auto a21 = a.block(q1, 0, q2, q1);
  const auto a22 = a.block(q1, q1, q2, q2);
  auto gamma = [&](const Matrix& aij, const Matrix& aji, double tri,
                   double trj) {
    return ((aij * aji).trace() - tri * trj / (n - 1.0)) / denom;
  };
  const double tr1 = a11.trace();
  const double tr2 = a22.trace();
  const double g11 = gamma(a11, a11, tr1, tr1);
  const double g22 = gamma(a22, a22, tr2, tr2);
  const double g12 = gamma(a12, a21, tr1, tr2);
  if (!(g11 > 0.0) || !(g22 > 0.0)) {
    throw DegenerateError("trace_T3: nonpositive gamma_11 or gamma_22");
  }
  const double value = std::sqrt(denom / 2.0) * g12 / std::sqrt(g11 * g22);
  return {StatName::trace_T3, value, ReferenceLaw::std_normal(),
          1.0 - specfun::std_normal_cdf(value), {}};
}

}  // namespace hdit
