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

#include "piezo_rkhs/rkhs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

namespace {

void check_sigma(double sigma) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw DomainError("kernel width sigma must be positive and finite");
  }
}

double smallest_eigenvalue(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace

double kernel(double x, double y, double sigma) {
  check_sigma(sigma);
  const double d = x - y;
  return std::exp(-d * d / (2.0 * sigma * sigma));
}

double kernel(std::span<const double> x, std::span<const double> y, double sigma) {
  check_sigma(sigma);
  if (x.size() != y.size() || x.empty()) {
    throw DimensionError("kernel: points must have the same non-zero dimension");
  }
  double d2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
  return std::exp(-d2 / (2.0 * sigma * sigma));
}

KernelBasis::KernelBasis(std::vector<double> centers, double sigma, double regularization)
    : centers_(std::move(centers)), sigma_(sigma), regularization_(regularization) {
  check_sigma(sigma_);
  if (centers_.empty()) throw DomainError("KernelBasis: at least one center is required");
  if (!(regularization_ >= 0.0)) throw DomainError("KernelBasis: regularization must be >= 0");
  {
    std::vector<double> sorted = centers_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw DomainError("KernelBasis: centers must be pairwise distinct");
    }
  }

  const auto n = static_cast<Eigen::Index>(centers_.size());
  gram_.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    gram_(i, i) = 1.0;
    for (Eigen::Index j = 0; j < i; ++j) {
      const double k = kernel(centers_[i], centers_[j], sigma_);
      gram_(i, j) = k;
      gram_(j, i) = k;
    }
  }

  const auto factorize = [&](double eps) {
    Eigen::MatrixXd shifted = gram_;
    shifted.diagonal().array() += eps;
    factor_.compute(shifted);
    return factor_.info() == Eigen::Success;
  };

  if (factorize(regularization_)) return;
  const double retry = std::max(regularization_, 1e-12 * gram_.trace() / static_cast<double>(n));
  if (factorize(retry)) {
    regularization_ = retry;
    return;
  }
  const double lambda_min = smallest_eigenvalue(gram_);
  throw IllConditionedError(lambda_min,
                            "Gram matrix is not positive definite even with regularization " +
                                std::to_string(retry) + "; smallest eigenvalue estimate " +
                                std::to_string(lambda_min));
}

double KernelBasis::min_spacing() const {
  if (centers_.size() < 2) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted = centers_;
  std::sort(sorted.begin(), sorted.end());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < sorted.size(); ++i) best = std::min(best, sorted[i] - sorted[i - 1]);
  return best;
}

Eigen::VectorXd KernelBasis::kernel_vector(double x) const {
  Eigen::VectorXd out;
  kernel_vector(x, out);
  return out;
}

void KernelBasis::kernel_vector(double x, Eigen::VectorXd& out) const {
  out.resize(static_cast<Eigen::Index>(centers_.size()));
  const double inv = 1.0 / (2.0 * sigma_ * sigma_);
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double d = centers_[i] - x;
    out[static_cast<Eigen::Index>(i)] = std::exp(-d * d * inv);
  }
}

double KernelBasis::evaluate(const Eigen::Ref<const Eigen::VectorXd>& alpha, double x) const {
  if (alpha.size() != static_cast<Eigen::Index>(centers_.size())) {
    throw DimensionError("evaluate_estimate: alpha has length " + std::to_string(alpha.size()) +
                         ", basis has " + std::to_string(centers_.size()) + " centers");
  }
  const double inv = 1.0 / (2.0 * sigma_ * sigma_);
  double sum = 0.0;
  for (std::size_t i = 0; i < centers_.size(); ++i) {
    const double d = centers_[i] - x;
    sum += alpha[static_cast<Eigen::Index>(i)] * std::exp(-d * d * inv);
  }
  return sum;
}

Eigen::VectorXd KernelBasis::gram_solve(const Eigen::Ref<const Eigen::VectorXd>& rhs) const {
  if (rhs.size() != gram_.rows()) {
    throw DimensionError("gram_solve: right-hand side length does not match the basis");
  }
  return factor_.solve(rhs);
}

double KernelBasis::rkhs_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const {
  if (coeffs.size() != gram_.rows()) {
    throw DimensionError("rkhs_norm_squared: coefficient length does not match the basis");
  }
  return coeffs.dot(gram_ * coeffs);
}

std::vector<double> equidistant_centers(Interval omega, std::size_t n) {
  if (n == 0) throw DomainError("equidistant_centers: n must be at least 1");
  if (n == 1) return {0.5 * (omega.lo + omega.hi)};
  if (!(omega.lo < omega.hi)) throw DomainError("equidistant_centers: require lo < hi");
  std::vector<double> centers(n);
  const double step = omega.width() / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) centers[i] = omega.lo + step * static_cast<double>(i);
  centers.back() = omega.hi;
  return centers;
}

KernelBasis make_basis(Interval omega, std::size_t n, double sigma, double regularization) {
  if (!(omega.lo < omega.hi)) throw DomainError("make_basis: require lo < hi");
  return KernelBasis(equidistant_centers(omega, n), sigma, regularization);
}

double evaluate_estimate(const KernelBasis& basis, const Eigen::VectorXd& alpha, double x) {
  return basis.evaluate(alpha, x);
}

}  // namespace piezo
