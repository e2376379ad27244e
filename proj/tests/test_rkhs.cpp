// Copyright 2026 The piezo-rkhs Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "oracle_values.hpp"
#include "piezo_rkhs/errors.hpp"
#include "piezo_rkhs/rkhs.hpp"
#include "test_support.hpp"

using namespace piezo;
using testing::rel_err;

namespace {

const Interval kReferenceOmega{-0.00037018, 0.00037026};

KernelBasis overlapping_basis() {
  const double spacing = kReferenceOmega.width() / 23.0;
  return make_basis(kReferenceOmega, 24, spacing);
}

}  // namespace

TEST_SUITE("rkhs") {

TEST_CASE("kernel values") {
  CHECK(kernel(0.37, 0.37, 0.1) == 1.0);
  const double sigma = 2.5e-5;
  CHECK(kernel(0.0, sigma * std::sqrt(2.0 * std::log(2.0)), sigma) ==
        doctest::Approx(0.5).epsilon(1e-14));
  CHECK(rel_err(kernel(0.0, 3e-5, 1e-5), oracle::exp_m4_5) < 1e-14);
  CHECK_THROWS_AS(kernel(0.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(kernel(0.0, 1.0, -1.0), DomainError);
}

TEST_CASE("kernel is symmetric and bounded on random pairs") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> x(-1e-3, 1e-3);
  std::uniform_real_distribution<double> s(1e-6, 1e-3);
  for (int i = 0; i < 1000; ++i) {
    const double a = x(rng), b = x(rng), sigma = s(rng);
    const double k = kernel(a, b, sigma);
    CHECK(k == kernel(b, a, sigma));
    CHECK(k <= 1.0);
    CHECK(k >= 0.0);
    if (a != b && std::abs(a - b) < 5.0 * sigma) CHECK(k < 1.0);
  }
}

TEST_CASE("multi-dimensional kernel uses the Euclidean distance") {
  const std::vector<double> p{0.0, 0.0}, q{3.0, 4.0};
  CHECK(rel_err(kernel(p, q, 5.0), std::exp(-0.5)) < 1e-15);
  const std::vector<double> bad{1.0};
  CHECK_THROWS_AS(kernel(p, bad, 1.0), DimensionError);
}

TEST_CASE("centers are equidistant with endpoints included") {
  const auto two = equidistant_centers({0.0, 1.0}, 2);
  REQUIRE(two.size() == 2);
  CHECK(two[0] == 0.0);
  CHECK(two[1] == 1.0);

  const auto one = equidistant_centers({-1.0, 3.0}, 1);
  CHECK(one == std::vector<double>{1.0});

  const auto grid = equidistant_centers(kReferenceOmega, 24);
  REQUIRE(grid.size() == 24);
  CHECK(grid.front() == kReferenceOmega.lo);
  CHECK(grid.back() == kReferenceOmega.hi);
  const double spacing = kReferenceOmega.width() / 23.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    CHECK(rel_err(grid[i] - grid[i - 1], spacing) < 1e-9);
  }
  CHECK_THROWS_AS(equidistant_centers({0.0, 1.0}, 0), DomainError);
  CHECK_THROWS_AS(make_basis({1.0, 0.0}, 4, 1.0), DomainError);
}

TEST_CASE("two-center Gram matrix and its inverse") {
  const KernelBasis basis = make_basis({0.0, 1.0}, 2, 1.0);
  const Eigen::MatrixXd& k = basis.gram();
  CHECK(k(0, 0) == 1.0);
  CHECK(k(1, 1) == 1.0);
  CHECK(rel_err(k(0, 1), oracle::gram2_offdiag) < 1e-15);
  CHECK(k(0, 1) == k(1, 0));
  CHECK(basis.regularization() == 0.0);

  const Eigen::VectorXd v0 = basis.gram_solve(Eigen::Vector2d(1.0, 0.0));
  CHECK(rel_err(v0(0), oracle::gram2_inv_diag) < 1e-12);
  CHECK(rel_err(v0(1), oracle::gram2_inv_offdiag) < 1e-12);
}

TEST_CASE("basis rejects bad input") {
  CHECK_THROWS_AS(KernelBasis({}, 1.0), DomainError);
  CHECK_THROWS_AS(KernelBasis({0.0, 1.0, 0.0}, 1.0), DomainError);
  CHECK_THROWS_AS(KernelBasis({0.0, 1.0}, 0.0), DomainError);
  CHECK_THROWS_AS(KernelBasis({0.0, 1.0}, 1.0, -1.0), DomainError);
}

TEST_CASE("near-singular Gram matrices are regularized") {
  std::vector<double> centers;
  for (int i = 0; i < 40; ++i) centers.push_back(1e-8 * i);
  const KernelBasis basis(centers, 1.0);
  CHECK(basis.regularization() > 0.0);
  CHECK(basis.regularization() == doctest::Approx(1e-12).epsilon(1e-9));
}

TEST_CASE("kernel vector") {
  const KernelBasis basis = overlapping_basis();
  const auto& c = basis.centers();
  const Eigen::VectorXd at_center = basis.kernel_vector(c[5]);
  CHECK(at_center(5) == 1.0);

  const Eigen::VectorXd far = basis.kernel_vector(1.0);
  CHECK(far.maxCoeff() < 1e-12);

  const Eigen::VectorXd mid = basis.kernel_vector(0.5 * (c[10] + c[11]));
  CHECK(rel_err(mid(10), oracle::exp_m1_8) < 1e-12);
  CHECK(rel_err(mid(11), oracle::exp_m1_8) < 1e-12);

  Eigen::VectorXd out;
  basis.kernel_vector(c[3], out);
  CHECK(out.size() == 24);
  CHECK(out == basis.kernel_vector(c[3]));
  CHECK(kernel_vector(basis, c[3]) == out);
}

TEST_CASE("function estimate") {
  const KernelBasis basis = overlapping_basis();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(24);
  CHECK(evaluate_estimate(basis, zero, 1e-4) == 0.0);
  CHECK_THROWS_AS(evaluate_estimate(basis, Eigen::VectorXd::Zero(23), 0.0), DimensionError);

  // well separated: sigma much smaller than the spacing
  const KernelBasis sparse = make_basis({0.0, 1.0}, 11, 1e-3);
  Eigen::VectorXd e3 = Eigen::VectorXd::Zero(11);
  e3(3) = 1.0;
  CHECK(std::abs(evaluate_estimate(sparse, e3, sparse.centers()[3]) - 1.0) < 1e-10);

  std::mt19937_64 rng(11);
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> x(kReferenceOmega.lo * 1.5, kReferenceOmega.hi * 1.5);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd a(24), b(24);
    for (int j = 0; j < 24; ++j) {
      a(j) = n01(rng);
      b(j) = n01(rng);
    }
    const double xi = x(rng);
    double brute = 0.0, scale = 0.0;
    for (int j = 0; j < 24; ++j) {
      const double d = basis.centers()[j] - xi;
      const double term = a(j) * std::exp(-d * d / (2.0 * basis.sigma() * basis.sigma()));
      brute += term;
      scale += std::abs(term);
    }
    CHECK(std::abs(evaluate_estimate(basis, a, xi) - brute) <= 1e-12 * std::max(scale, 1.0));
    const double lin = evaluate_estimate(basis, a + b, xi) -
                       evaluate_estimate(basis, a, xi) - evaluate_estimate(basis, b, xi);
    CHECK(std::abs(lin) <= 1e-12 * (a.cwiseAbs().sum() + b.cwiseAbs().sum()));
  }
}

TEST_CASE("Gram solve") {
  const KernelBasis identity = make_basis({0.0, 1.0}, 5, 1e-4);
  const Eigen::VectorXd rhs = Eigen::VectorXd::LinSpaced(5, -2.0, 2.0);
  CHECK((identity.gram_solve(rhs) - rhs).cwiseAbs().maxCoeff() == 0.0);

  const KernelBasis basis = overlapping_basis();
  for (int j : {0, 7, 23}) {
    const Eigen::VectorXd v = gram_solve(basis, basis.gram().col(j));
    const Eigen::VectorXd e = Eigen::VectorXd::Unit(24, j);
    CHECK((v - e).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("Gram matrix is positive semidefinite on random vectors") {
  const KernelBasis basis = overlapping_basis();
  std::mt19937_64 rng(2026);
  std::normal_distribution<double> n01;
  for (int trial = 0; trial < 1000; ++trial) {
    Eigen::VectorXd c(24);
    for (int j = 0; j < 24; ++j) c(j) = n01(rng);
    CHECK(basis.rkhs_norm_squared(c) >= -1e-12);
  }
}

TEST_CASE("RKHS norm vanishes exactly when the estimate vanishes on the centers") {
  const KernelBasis basis = overlapping_basis();
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(24);
  CHECK(basis.rkhs_norm_squared(zero) == 0.0);
  for (double x : basis.centers()) CHECK(basis.evaluate(zero, x) == 0.0);

  Eigen::VectorXd c = Eigen::VectorXd::Zero(24);
  c(4) = 1e-3;
  CHECK(basis.rkhs_norm_squared(c) > 0.0);
  double largest = 0.0;
  for (double x : basis.centers()) largest = std::max(largest, std::abs(basis.evaluate(c, x)));
  CHECK(largest > 0.0);
}

TEST_CASE("gram properties") {
  const KernelBasis basis = overlapping_basis();
  const Eigen::MatrixXd& k = basis.gram();
  CHECK((k - k.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(k.diagonal().isOnes());
  CHECK(k.minCoeff() > 0.0);
  CHECK(k.maxCoeff() <= 1.0);
  CHECK(rel_err(basis.min_spacing(), kReferenceOmega.width() / 23.0) < 1e-9);
}

}  // TEST_SUITE
