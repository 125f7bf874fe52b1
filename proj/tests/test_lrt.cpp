#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include <vector>

#include "hdit/lrt.hpp"
#include "hdit/rng.hpp"
#include "test_util.hpp"

using namespace hdit;
using Catch::Matchers::WithinAbs;

namespace {

Matrix gaussian_data(int n, int p, std::uint64_t seed) {
  Rng rng(seed);
  Matrix x(n, p);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < p; ++j) x(i, j) = sample_normal(rng);
  }
  return x;
}

}  // namespace

TEST_CASE("scatter basics") {
  Matrix x(3, 2);
  x << 1, 0, 2, 1, 3, 2;
  const Matrix a = scatter(x);
  // Columns are (1,2,3) and (0,1,2): both have centered sum of squares 2
  // and cross-product 2.
  CHECK_THAT(a(0, 0), WithinAbs(2.0, 1e-12));
  CHECK_THAT(a(1, 1), WithinAbs(2.0, 1e-12));
  CHECK_THAT(a(0, 1), WithinAbs(2.0, 1e-12));
  CHECK((a - Matrix(a.transpose())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("scatter is translation invariant") {
  const Matrix x = gaussian_data(20, 5, 1);
  Matrix shifted = x;
  shifted.rowwise() += Eigen::RowVectorXd::Constant(5, 17.5);
  CHECK((scatter(x) - scatter(shifted)).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("scatter rejects bad input") {
  CHECK_THROWS_AS(scatter(Matrix::Zero(1, 3)), std::invalid_argument);
  Matrix bad = Matrix::Zero(4, 2);
  bad(2, 1) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(scatter(bad), std::invalid_argument);
}

TEST_CASE("log_det_spd") {
  CHECK_THAT(log_det_spd(Matrix::Identity(4, 4), "id"), WithinAbs(0.0, 1e-12));
  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 2.0;
  d(1, 1) = 3.0;
  CHECK_THAT(log_det_spd(d, "diag"), WithinAbs(std::log(6.0), 1e-12));
  Matrix neg = Matrix::Identity(2, 2);
  neg(1, 1) = -1.0;
  CHECK_THROWS_AS(log_det_spd(neg, "neg"), FactorizationError);
  CHECK_THROWS_AS(log_det_spd(Matrix::Zero(3, 3), "zero"), FactorizationError);
}

TEST_CASE("neg2_log_lambda validation") {
  const GroupPartition part({3, 2});
  CHECK_THROWS_AS(neg2_log_lambda(Matrix::Identity(4, 4), part, 20),
                  PartitionError);
  CHECK_THROWS_AS(neg2_log_lambda(Matrix::Identity(5, 5), part, 5),
                  PartitionError);
  const Matrix a = scatter(gaussian_data(4, 5, 2));
  CHECK_THROWS_AS(neg2_log_lambda(a, part, 4), PartitionError);
}

TEST_CASE("neg2_log_lambda is nonnegative and zero iff block-diagonal") {
  const GroupPartition part({3, 2});
  for (std::uint64_t seed = 10; seed < 30; ++seed) {
    const Matrix a = scatter(gaussian_data(20, 5, seed));
    CHECK(neg2_log_lambda(a, part, 20) >= 0.0);
  }
  Matrix bd = Matrix::Zero(5, 5);
  bd.block(0, 0, 3, 3) = scatter(gaussian_data(20, 3, 3)).block(0, 0, 3, 3);
  bd.block(3, 3, 2, 2) = scatter(gaussian_data(20, 2, 4)).block(0, 0, 2, 2);
  CHECK_THAT(neg2_log_lambda(bd, part, 20), WithinAbs(0.0, 1e-9));
}

TEST_CASE("two-dimensional case matches the correlation closed form") {
  const GroupPartition part({1, 1});
  for (std::uint64_t seed = 40; seed < 45; ++seed) {
    const int n = 25;
    const Matrix x = gaussian_data(n, 2, seed);
    const Matrix a = scatter(x);
    const double r2 = a(0, 1) * a(0, 1) / (a(0, 0) * a(1, 1));
    const double expected = -n * std::log1p(-r2);
    CHECK_THAT(neg2_log_lambda(a, part, n), WithinAbs(expected, 1e-9));
  }
}

TEST_CASE("statistic is invariant under block-wise linear maps") {
  const GroupPartition part({3, 2});
  const int n = 30;
  const Matrix x = gaussian_data(n, 5, 77);
  const double base = neg2_log_lambda(scatter(x), part, n);

  Rng rng(78);
  Matrix t = Matrix::Zero(5, 5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) t(i, j) = sample_normal(rng);
  }
  for (int i = 3; i < 5; ++i) {
    for (int j = 3; j < 5; ++j) t(i, j) = sample_normal(rng);
  }
  REQUIRE(std::fabs(t.block(0, 0, 3, 3).determinant()) > 1e-6);
  REQUIRE(std::fabs(t.block(3, 3, 2, 2).determinant()) > 1e-6);
  const Matrix y = x * t.transpose();
  CHECK_THAT(neg2_log_lambda(scatter(y), part, n),
             WithinAbs(base, 1e-7 * (1.0 + std::fabs(base))));
}

TEST_CASE("null law is free of the block-diagonal covariance") {
  const GroupPartition part({3, 2});
  const int n = 20;
  constexpr int kReps = 5000;

  Rng rng(314);
  Matrix t = Matrix::Zero(5, 5);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j <= i; ++j) t(i, j) = sample_normal(rng);
    t(i, i) += 3.0;
  }
  for (int i = 3; i < 5; ++i) {
    for (int j = 3; j <= i; ++j) t(i, j) = sample_normal(rng);
    t(i, i) += 3.0;
  }

  std::vector<double> identity_draws(kReps), transformed_draws(kReps);
  for (int rep = 0; rep < kReps; ++rep) {
    const Matrix z = gaussian_data(n, 5, 1000 + rep);
    identity_draws[rep] = neg2_log_lambda(scatter(z), part, n);
    const Matrix z2 = gaussian_data(n, 5, 100000 + rep);
    transformed_draws[rep] =
        neg2_log_lambda(scatter(Matrix(z2 * t.transpose())), part, n);
  }
  const double d = hdit_test::ks_two_sample(identity_draws, transformed_draws);
  CHECK(d < hdit_test::ks_two_sample_crit_1pct(kReps, kReps));
}

TEST_CASE("statistic is invariant under swapping the two blocks") {
  const GroupPartition part({3, 2});
  const GroupPartition swapped({2, 3});
  const int n = 30;
  const Matrix x = gaussian_data(n, 5, 91);
  Matrix y(n, 5);
  y.leftCols(2) = x.rightCols(2);
  y.rightCols(3) = x.leftCols(3);
  const double a = neg2_log_lambda(scatter(x), part, n);
  const double b = neg2_log_lambda(scatter(y), swapped, n);
  CHECK_THAT(a, WithinAbs(b, 1e-8 * (1.0 + std::fabs(a))));
}
