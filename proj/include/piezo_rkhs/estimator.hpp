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
#include <functional>
#include <vector>

#include "piezo_rkhs/beam_model.hpp"
#include "piezo_rkhs/rkhs.hpp"

namespace piezo {

/// Scalar nonlinearity f(x1) acting through B_N.
using Nonlinearity = std::function<double(double x1)>;

/// The plant's own polynomial nonlinearity.
Nonlinearity plant_nonlinearity(const PlantModel& plant);

/// f(x1) = alpha^T k(x1): a truth that lies in the span of `basis`.
Nonlinearity kernel_expansion(const KernelBasis& basis, Eigen::VectorXd alpha);

struct EstimatorConfig {
  double gamma = 1.0;  ///< adaptation gain; the learning law uses 1 / gamma
  Eigen::Matrix2d q_matrix = Eigen::Matrix2d::Identity();
  Eigen::Vector2d initial_x = Eigen::Vector2d::Zero();
  Eigen::Vector2d initial_xhat = Eigen::Vector2d::Zero();
  Eigen::VectorXd initial_alpha;  ///< empty means zeros

  /// Checks gamma > 0, Q symmetric positive definite and the alpha length.
  void validate(std::size_t basis_size) const;
};

struct CoupledState {
  Eigen::Vector2d x = Eigen::Vector2d::Zero();     ///< plant (measured) state
  Eigen::Vector2d xhat = Eigen::Vector2d::Zero();  ///< estimator state
  Eigen::VectorXd alpha;                           ///< kernel coefficients

  bool finite() const { return x.allFinite() && xhat.allFinite() && alpha.allFinite(); }
};

/// Symmetric P with A^T P + P A = -Q. Throws LyapunovError unless A is
/// Hurwitz, DomainError unless Q is symmetric positive definite.
Eigen::Matrix2d lyapunov_solve(const Eigen::Matrix2d& A, const Eigen::Matrix2d& Q);

/// A x + B u(t) + B_N f(x1).
Eigen::Vector2d plant_rhs(const PlantModel& plant, const Nonlinearity& f, const Eigen::Vector2d& x,
                          double t);
Eigen::Vector2d plant_rhs(const PlantModel& plant, const Eigen::Vector2d& x, double t);

struct EstimatorDerivative {
  Eigen::Vector2d dxhat;
  Eigen::VectorXd dalpha;
};

/// Estimator model and learning law. Every kernel evaluation uses the
/// plant's measured displacement state.x(0), never the estimate.
EstimatorDerivative estimator_rhs(const PlantModel& plant, const KernelBasis& basis,
                                  const Eigen::Matrix2d& P, double gamma,
                                  const CoupledState& state, double t);

/// Uniformly sampled record of a coupled run.
struct Trajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector2d> x;
  std::vector<Eigen::Vector2d> xhat;
  std::vector<Eigen::VectorXd> alpha;
  std::vector<double> err_norm;
  std::vector<double> fhat_at_x1;

  std::size_t size() const { return t.size(); }
  /// Index of the recorded sample closest to time `time`.
  std::size_t index_at(double time) const;
};

struct RunSettings {
  double t_final = 0.0;
  double dt = 1e-3;
  int record_stride = 1;
};

/// Called at t = 0 and after every integration step, independent of the
/// record stride.
using StepObserver = std::function<void(double t, const Eigen::Vector2d& x,
                                        const Eigen::Vector2d& xhat,
                                        const Eigen::Ref<const Eigen::VectorXd>& alpha)>;

/// Integrates plant, estimator and learning law together with RK4.
/// `truth` defaults to the plant's polynomial nonlinearity.
Trajectory run_coupled(const PlantModel& plant, const KernelBasis& basis,
                       const EstimatorConfig& ecfg, const RunSettings& run,
                       const Nonlinearity& truth = {}, const StepObserver& on_step = {});

/// Plant-only record: t, x.
struct PlantTrajectory {
  std::vector<double> t;
  std::vector<Eigen::Vector2d> x;
};

PlantTrajectory simulate_plant(const PlantModel& plant, const RunSettings& run,
                               const Eigen::Vector2d& x0 = Eigen::Vector2d::Zero(),
                               const Nonlinearity& truth = {});

struct ErrorReport {
  std::vector<double> state_error;  ///< |x - xhat| per recorded sample
  Interval omega;                   ///< span of the kernel centers
  double sup_error = 0.0;           ///< sup over omega of |f - fhat(T)|
  double rms_error = 0.0;
  double sup_truth = 0.0;           ///< sup over omega of |f|
  double sup_error_outside = 0.0;   ///< same sup on flanks of width |omega|/2 each side
  double coefficient_drift = 0.0;   ///< |alpha(T) - alpha(0.9 T)|_2
  double coefficient_drift_max = 0.0;  ///< max_j |alpha_j(T) - alpha_j(0.9 T)|
  double max_abs_alpha = 0.0;          ///< max_j |alpha_j(T)|
};

/// Function-error and convergence summary of a finished run. Omega is the
/// interval spanned by the basis centers; `grid_points` must be >= 512.
ErrorReport error_diagnostics(const Trajectory& traj, const Nonlinearity& truth,
                              const KernelBasis& basis, int grid_points = 512);
ErrorReport error_diagnostics(const Trajectory& traj, const PlantModel& plant,
                              const KernelBasis& basis, int grid_points = 512);

/// x~^T P x~ + gamma (alpha* - alpha)^T K (alpha* - alpha) per recorded
/// sample, for a truth alpha* in the span of the basis.
std::vector<double> lyapunov_surrogate(const Trajectory& traj, const Eigen::Matrix2d& P,
                                       double gamma, const KernelBasis& basis,
                                       const Eigen::VectorXd& alpha_true);

}  // namespace piezo
