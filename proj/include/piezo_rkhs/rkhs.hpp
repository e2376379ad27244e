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

#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

namespace piezo {

/// Closed interval [lo, hi] of displacement values.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
};

/// Gaussian kernel exp(-(x - y)^2 / (2 sigma^2)).
double kernel(double x, double y, double sigma);

/// Same kernel on points of any fixed dimension (Euclidean distance).
double kernel(std::span<const double> x, std::span<const double> y, double sigma);

/// Gaussian kernel basis on a fixed set of 1-D centers with a cached
/// Cholesky factor of the Gram matrix. Immutable once built.
class KernelBasis {
 public:
  /// Builds the Gram matrix and factorizes it. If the plain factorization
  /// fails, retries once with a 1e-12 * trace / n diagonal shift; if that
  /// fails too, throws IllConditionedError.
  KernelBasis(std::vector<double> centers, double sigma, double regularization = 0.0);

  double sigma() const { return sigma_; }
  std::size_t size() const { return centers_.size(); }
  const std::vector<double>& centers() const { return centers_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  /// Diagonal shift actually used in the factorization.
  double regularization() const { return regularization_; }
  /// Minimum spacing between adjacent centers (infinity for one center).
  double min_spacing() const;

  Eigen::VectorXd kernel_vector(double x) const;
  /// Writes the kernel vector into `out` (resized as needed).
  void kernel_vector(double x, Eigen::VectorXd& out) const;

  /// alpha^T k(x).
  double evaluate(const Eigen::Ref<const Eigen::VectorXd>& alpha, double x) const;

  /// Solves (K + eps I) v = rhs.
  Eigen::VectorXd gram_solve(const Eigen::Ref<const Eigen::VectorXd>& rhs) const;

  /// c^T K c, the squared RKHS norm of sum_j c_j K(x_j, .).
  double rkhs_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& coeffs) const;

 private:
  std::vector<double> centers_;
  double sigma_;
  double regularization_;
  Eigen::MatrixXd gram_;
  Eigen::LLT<Eigen::MatrixXd> factor_;
};

/// n equidistant centers spanning [lo, hi], endpoints included.
std::vector<double> equidistant_centers(Interval omega, std::size_t n);

KernelBasis make_basis(Interval omega, std::size_t n, double sigma, double regularization = 0.0);

inline Eigen::VectorXd kernel_vector(const KernelBasis& basis, double x) {
  return basis.kernel_vector(x);
}

/// alpha^T k(x); throws DimensionError when alpha has the wrong length.
double evaluate_estimate(const KernelBasis& basis, const Eigen::VectorXd& alpha, double x);

inline Eigen::VectorXd gram_solve(const KernelBasis& basis, const Eigen::VectorXd& rhs) {
  return basis.gram_solve(rhs);
}

}  // namespace piezo
