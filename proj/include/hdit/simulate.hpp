#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "hdit/limit_dists.hpp"
#include "hdit/lrt.hpp"
#include "hdit/null_oracle.hpp"
#include "hdit/partition.hpp"
#include "hdit/rng.hpp"
#include "hdit/statistics.hpp"

// Monte Carlo harness: null histograms with theoretical overlays and
// size/power tables under the two dependence models.  Replicates are
// independent units of work; each derives its RNG from (seed, index),
// so results do not depend on how work is split across threads.

namespace hdit {

enum class SimModel { null_gaussian, model1, model2 };

inline const char* model_str(SimModel model) {
  switch (model) {
    case SimModel::null_gaussian: return "null_gaussian";
    case SimModel::model1: return "model1";
    case SimModel::model2: return "model2";
  }
  return "?";
}

struct SimConfig {
  SimModel model = SimModel::null_gaussian;
  double c = 0.0;
  NullLawSpec spec;
  int reps = 1;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::vector<StatName> methods;

  SimConfig(SimModel m, double effect, NullLawSpec s, int replicates,
            std::uint64_t sd, double level, std::vector<StatName> stats)
      : model(m), c(effect), spec(std::move(s)), reps(replicates), seed(sd),
        alpha(level), methods(std::move(stats)) {
    if (reps < 1) throw std::invalid_argument("reps must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
      throw std::invalid_argument("alpha must lie in (0,1)");
    }
    if (model != SimModel::null_gaussian && spec.partition.k != 2) {
      throw PartitionError("model1/model2 require a two-block partition");
    }
    if (model != SimModel::null_gaussian &&
        spec.partition.q[1] >= spec.partition.q[0]) {
      std::cerr << "warning: models assume q1 > q2 >= 1, got q1="
                << spec.partition.q[0] << " q2=" << spec.partition.q[1]
                << "\n";
    }
  }
};

inline int worker_count() {
  if (const char* env = std::getenv("HDIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

// Static chunking over [0, count); fn(index) must be independent per index.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  const int workers = std::min(worker_count(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < count; i += workers) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// One replicate of n observations.  null_gaussian: i.i.d. N_p(0, I).
// model1: x_i = (1+c) z_i for i <= q1, x_{q1+j} = z_{q1+j} + c z_j.
// model2: model1 with the last coordinate's idiosyncratic noise shrunk,
// x_p = p^{-1/2} z_p + c z_{q2}.  Shrinking the noise leaves the raw
// cross-covariance unchanged but inflates the correlation after
// whitening, which is what separates the trace test from the
// likelihood-ratio family in the size/power tables.
inline Matrix generate_sample(const SimConfig& config, int replicate) {
  const int n = config.spec.n;
  const int p = config.spec.partition.p;
  Rng rng = derive_rng(config.seed, static_cast<std::uint64_t>(replicate));
  Matrix z(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) {
      z(i, j) = sample_normal(rng);
    }
  }
  if (config.model == SimModel::null_gaussian) return z;

  const int q1 = config.spec.partition.q[0];
  const int q2 = config.spec.partition.q[1];
  const double c = config.c;
  Matrix x(n, p);
  x.leftCols(q1) = (1.0 + c) * z.leftCols(q1);
  for (int j = 0; j < q2; ++j) {
    x.col(q1 + j) = z.col(q1 + j) + c * z.col(j);
  }
  if (config.model == SimModel::model2) {
    x.col(p - 1) = std::pow(static_cast<double>(p), -0.5) * z.col(p - 1) +
                   c * z.col(q2 - 1);
  }
  return x;
}

namespace detail {

inline bool is_lrt_family(StatName name) {
  switch (name) {
    case StatName::bartlett:
    case StatName::clt_T0:
    case StatName::clt_T1:
    case StatName::alrt_Zn:
    case StatName::logchi:
      return true;
    default:
      return false;
  }
}

inline StatisticReport report_for(StatName name, const Matrix& a, double stat,
                                  const NullLawSpec& spec) {
  switch (name) {
    case StatName::bartlett: return bartlett_test(stat, spec);
    case StatName::clt_T0: return clt_T0(stat, spec);
    case StatName::clt_T1: return clt_T1(stat, spec);
    case StatName::alrt_Zn: return alrt_Zn(stat, spec);
    case StatName::logchi: return logchi_test(stat, spec);
    case StatName::trace_T2: return trace_T2(a, spec);
    case StatName::trace_T3: return trace_T3(a, spec);
  }
  throw std::logic_error("unknown statistic");
}

}  // namespace detail

struct SizePowerRow {
  std::map<StatName, double> reject_rate;
  std::map<StatName, double> se;
};

inline SizePowerRow estimate_size_power(const SimConfig& config) {
  const bool need_lrt = std::any_of(config.methods.begin(),
                                    config.methods.end(),
                                    detail::is_lrt_family);
  std::vector<std::vector<char>> rejected(
      config.methods.size(), std::vector<char>(config.reps, 0));
  parallel_for(config.reps, [&](int rep) {
    const Matrix data = generate_sample(config, rep);
    const Matrix a = scatter(data);
    double stat = 0.0;
    if (need_lrt) stat = neg2_log_lambda(a, config.spec.partition, config.spec.n);
    for (std::size_t m = 0; m < config.methods.size(); ++m) {
      const auto report =
          detail::report_for(config.methods[m], a, stat, config.spec);
      rejected[m][rep] = report.reject_at(config.alpha) ? 1 : 0;
    }
  });
  SizePowerRow row;
  for (std::size_t m = 0; m < config.methods.size(); ++m) {
    long count = 0;
    for (char r : rejected[m]) count += r;
    const double freq = static_cast<double>(count) / config.reps;
    row.reject_rate[config.methods[m]] = freq;
    row.se[config.methods[m]] =
        std::sqrt(freq * (1.0 - freq) / config.reps);
  }
  return row;
}

struct HistogramOutput {
  std::vector<double> edges;    // bins + 1 entries
  std::vector<double> density;  // per bin, integrates to 1
  std::vector<std::pair<double, double>> curve;  // (x, theoretical density)
};

// Null replicates of one statistic, binned to density scale with the
// theoretical overlay attached.  With fast=true the beta-product sampler
// replaces the Gaussian pipeline (LRT-family statistics only).
inline HistogramOutput null_histogram(const SimConfig& config, StatName stat,
                                      int bins, bool fast = false) {
  if (stat != StatName::bartlett && stat != StatName::clt_T0 &&
      stat != StatName::alrt_Zn && stat != StatName::logchi) {
    throw PartitionError(
        "null histograms are defined for bartlett, clt_T0, alrt_Zn, logchi");
  }
  if (bins < 1) throw std::invalid_argument("bins must be >= 1");

  std::vector<double> values(config.reps);
  parallel_for(config.reps, [&](int rep) {
    double raw;
    if (fast) {
      Rng rng = derive_rng(config.seed, static_cast<std::uint64_t>(rep));
      raw = sample_neg2_log_lambda(config.spec, rng);
    } else {
      const Matrix data = generate_sample(config, rep);
      raw = neg2_log_lambda(scatter(data), config.spec.partition,
                            config.spec.n);
    }
    values[rep] = detail::report_for(stat, Matrix(), raw, config.spec).value;
  });

  const auto [mn_it, mx_it] = std::minmax_element(values.begin(), values.end());
  double lo = *mn_it, hi = *mx_it;
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / bins;

  HistogramOutput out;
  out.edges.resize(bins + 1);
  for (int b = 0; b <= bins; ++b) out.edges[b] = lo + b * width;
  std::vector<long> counts(bins, 0);
  for (double v : values) {
    int b = static_cast<int>((v - lo) / width);
    b = std::clamp(b, 0, bins - 1);
    ++counts[b];
  }
  out.density.resize(bins);
  for (int b = 0; b < bins; ++b) {
    out.density[b] = counts[b] / (width * config.reps);
  }

  const int curve_points = 200;
  const double f = degrees_f(config.spec.partition);
  const LogChiLimit law(std::max(config.spec.partition.r_gap, 1),
                        std::max(config.spec.n - config.spec.partition.p, 1));
  out.curve.reserve(curve_points + 1);
  for (int i = 0; i <= curve_points; ++i) {
    const double x = lo + (hi - lo) * i / curve_points;
    double d = 0.0;
    switch (stat) {
      case StatName::bartlett:
      case StatName::alrt_Zn:
        d = specfun::chisq_pdf(x, f);
        break;
      case StatName::clt_T0:
        d = specfun::std_normal_pdf(x);
        break;
      case StatName::logchi:
        d = (law.r == 1) ? logchi_density(law, x) : logchi_density_kde(law, x);
        break;
      default:
        break;
    }
    out.curve.emplace_back(x, d);
  }
  return out;
}

}  // namespace hdit
