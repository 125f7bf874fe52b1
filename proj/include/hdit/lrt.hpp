#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

#include "hdit/partition.hpp"

// Data pipeline: n x p observations -> scatter matrix -> Wilks statistic
// -2 log Lambda_n via block log-determinants.

namespace hdit {

using Matrix = Eigen::MatrixXd;

struct FactorizationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A = sum_i (x_i - xbar)(x_i - xbar)', symmetry enforced exactly.
inline Matrix scatter(const Matrix& data) {
  if (data.rows() < 2) {
    throw std::invalid_argument("scatter: need at least two observations");
  }
  if (!data.allFinite()) {
    throw std::invalid_argument("scatter: non-finite entries in data");
  }
  const Matrix centered = data.rowwise() - data.colwise().mean();
  Matrix a = centered.transpose() * centered;
  a = 0.5 * (a + a.transpose()).eval();
  return a;
}

// log|M| for symmetric positive definite M, via Cholesky.  A failed
// factorization signals p >= n, degenerate data or an invalid partition.
inline double log_det_spd(const Matrix& m, const std::string& what) {
  Eigen::LLT<Matrix> llt(m);
  if (llt.info() != Eigen::Success) {
    throw FactorizationError("matrix not positive definite: " + what);
  }
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

// -2 log Lambda_n = -n (log|A| - sum_i log|A_ii|), nonnegative by the
// Hadamard-Fischer inequality; tiny negative round-off is clamped to 0.
inline double neg2_log_lambda(const Matrix& a, const GroupPartition& part,
                              int n) {
  if (a.rows() != a.cols() || a.rows() != part.p) {
    throw PartitionError("partition does not tile the scatter matrix");
  }
  if (part.p >= n) {
    throw PartitionError("-2 log Lambda requires p < n");
  }
  double block_sum = 0.0;
  int offset = 0;
  for (std::size_t i = 0; i < part.q.size(); ++i) {
    const int qi = part.q[i];
    block_sum += log_det_spd(a.block(offset, offset, qi, qi),
                             "diagonal block " + std::to_string(i + 1));
    offset += qi;
  }
  const double full = log_det_spd(a, "full scatter matrix");
  double stat = -static_cast<double>(n) * (full - block_sum);
  if (stat < 0.0 && stat > -1e-9) stat = 0.0;
  return stat;
}

}  // namespace hdit
