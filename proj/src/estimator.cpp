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

#include "piezo_rkhs/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "piezo_rkhs/errors.hpp"
#include "piezo_rkhs/integrator.hpp"

namespace piezo {

namespace {

bool is_spd(const Eigen::Matrix2d& m) {
  const double asym = std::abs(m(0, 1) - m(1, 0));
  const double scale = m.cwiseAbs().maxCoeff();
  return asym <= 1e-12 * scale && m(0, 0) > 0.0 && m.determinant() > 0.0;
}

// Combined state layout: [x1, x2, xhat1, xhat2, alpha_0 .. alpha_{n-1}].
constexpr Eigen::Index kAlphaOffset = 4;

}  // namespace

Nonlinearity plant_nonlinearity(const PlantModel& plant) {
  return [plant](double x1) { return true_nonlinearity(plant, x1); };
}

Nonlinearity kernel_expansion(const KernelBasis& basis, Eigen::VectorXd alpha) {
  if (alpha.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionError("kernel_expansion: alpha length does not match the basis");
  }
  return [basis, alpha = std::move(alpha)](double x1) { return basis.evaluate(alpha, x1); };
}

void EstimatorConfig::validate(std::size_t basis_size) const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ValidationError("estimator gamma must be positive and finite");
  }
  if (!is_spd(q_matrix)) {
    throw ValidationError("estimator Q must be symmetric positive definite");
  }
  if (initial_alpha.size() != 0 &&
      initial_alpha.size() != static_cast<Eigen::Index>(basis_size)) {
    throw DimensionError("initial_alpha has length " + std::to_string(initial_alpha.size()) +
                         ", basis has " + std::to_string(basis_size) + " centers");
  }
  if (!initial_x.allFinite() || !initial_xhat.allFinite() || !initial_alpha.allFinite()) {
    throw ValidationError("initial conditions must be finite");
  }
}

Eigen::Matrix2d lyapunov_solve(const Eigen::Matrix2d& A, const Eigen::Matrix2d& Q) {
  if (!is_spd(Q)) throw DomainError("lyapunov_solve: Q must be symmetric positive definite");
  // A 2x2 real matrix is Hurwitz iff trace < 0 and det > 0.
  if (!(A.trace() < 0.0 && A.determinant() > 0.0)) {
    throw LyapunovError("lyapunov_solve: A is not Hurwitz, no positive definite solution");
  }
  // (I (x) A^T + A^T (x) I) vec(P) = -vec(Q), column-major vec.
  const Eigen::Matrix2d At = A.transpose();
  const Eigen::Matrix2d I = Eigen::Matrix2d::Identity();
  Eigen::Matrix4d L;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      L.block<2, 2>(2 * i, 2 * j) = I(i, j) * At + At(i, j) * I;
    }
  }
  const Eigen::Vector4d rhs = -Eigen::Map<const Eigen::Vector4d>(Q.data());
  const Eigen::Vector4d vecP = L.fullPivLu().solve(rhs);
  Eigen::Matrix2d P = Eigen::Map<const Eigen::Matrix2d>(vecP.data());
  P = 0.5 * (P + P.transpose()).eval();
  if (!is_spd(P)) throw LyapunovError("lyapunov_solve: solution is not positive definite");
  return P;
}

Eigen::Vector2d plant_rhs(const PlantModel& plant, const Nonlinearity& f,
                          const Eigen::Vector2d& x, double t) {
  return plant.A * x + plant.B_vec * plant.input(t) + plant.B_N_vec * f(x(0));
}

Eigen::Vector2d plant_rhs(const PlantModel& plant, const Eigen::Vector2d& x, double t) {
  return plant.A * x + plant.B_vec * plant.input(t) +
         plant.B_N_vec * true_nonlinearity(plant, x(0));
}

EstimatorDerivative estimator_rhs(const PlantModel& plant, const KernelBasis& basis,
                                  const Eigen::Matrix2d& P, double gamma,
                                  const CoupledState& state, double t) {
  if (state.alpha.size() != static_cast<Eigen::Index>(basis.size())) {
    throw DimensionError("estimator_rhs: alpha length does not match the basis");
  }
  const double measured_x1 = state.x(0);
  const Eigen::VectorXd k = basis.kernel_vector(measured_x1);
  const Eigen::Vector2d state_error = state.x - state.xhat;

  EstimatorDerivative out;
  out.dxhat = plant.A * state.xhat + plant.B_vec * plant.input(t) +
              plant.B_N_vec * state.alpha.dot(k);
  const double projected_error = plant.B_N_vec.dot(P * state_error);
  out.dalpha = basis.gram_solve(k) * (projected_error / gamma);
  return out;
}

std::size_t Trajectory::index_at(double time) const {
  if (t.empty()) throw DomainError("Trajectory::index_at: empty trajectory");
  const auto it = std::lower_bound(t.begin(), t.end(), time);
  if (it == t.end()) return t.size() - 1;
  const auto i = static_cast<std::size_t>(it - t.begin());
  if (i > 0 && std::abs(t[i - 1] - time) <= std::abs(t[i] - time)) return i - 1;
  return i;
}

Trajectory run_coupled(const PlantModel& plant, const KernelBasis& basis,
                       const EstimatorConfig& ecfg, const RunSettings& run,
                       const Nonlinearity& truth, const StepObserver& on_step) {
  const std::size_t n = basis.size();
  ecfg.validate(n);
  if (run.record_stride < 1) throw DomainError("run_coupled: record_stride must be >= 1");
  const Eigen::Matrix2d P = lyapunov_solve(plant.A, ecfg.q_matrix);
  const Nonlinearity f = truth ? truth : plant_nonlinearity(plant);
  const double inv_gamma = 1.0 / ecfg.gamma;
  const Eigen::Vector2d pbn = P * plant.B_N_vec;  // B_N^T P x~ = (P B_N)^T x~

  const auto dim = static_cast<Eigen::Index>(kAlphaOffset + n);
  StateVector y0(dim);
  y0.segment<2>(0) = ecfg.initial_x;
  y0.segment<2>(2) = ecfg.initial_xhat;
  y0.tail(static_cast<Eigen::Index>(n)) =
      ecfg.initial_alpha.size() == 0 ? Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n))
                                     : ecfg.initial_alpha;

  Eigen::VectorXd k(static_cast<Eigen::Index>(n));
  auto rhs = [&](double t, const StateVector& y, StateVector& dydt) {
    const Eigen::Vector2d x = y.segment<2>(0);
    const Eigen::Vector2d xhat = y.segment<2>(2);
    const auto alpha = y.tail(static_cast<Eigen::Index>(n));
    const double measured_x1 = x(0);
    basis.kernel_vector(measured_x1, k);
    const double u = plant.input(t);

    dydt.segment<2>(0) = plant.A * x + plant.B_vec * u + plant.B_N_vec * f(measured_x1);
    dydt.segment<2>(2) = plant.A * xhat + plant.B_vec * u + plant.B_N_vec * alpha.dot(k);
    const double projected_error = pbn.dot(x - xhat);
    dydt.tail(static_cast<Eigen::Index>(n)) = basis.gram_solve(k) * (projected_error * inv_gamma);
  };

  Trajectory traj;
  const long long steps = step_count(0.0, run.t_final, run.dt);
  const auto reserve = static_cast<std::size_t>(steps / run.record_stride + 2);
  traj.t.reserve(reserve);
  traj.x.reserve(reserve);
  traj.xhat.reserve(reserve);
  traj.alpha.reserve(reserve);
  traj.err_norm.reserve(reserve);
  traj.fhat_at_x1.reserve(reserve);

  integrate_fixed(rhs, y0, 0.0, run.t_final, run.dt,
                  [&](long long step, double t, const StateVector& y) {
                    if (on_step) {
                      on_step(t, y.segment<2>(0), y.segment<2>(2),
                              y.tail(static_cast<Eigen::Index>(n)));
                    }
                    if (step % run.record_stride != 0 && step != steps) return;
                    const Eigen::Vector2d x = y.segment<2>(0);
                    const Eigen::Vector2d xhat = y.segment<2>(2);
                    Eigen::VectorXd alpha = y.tail(static_cast<Eigen::Index>(n));
                    traj.t.push_back(t);
                    traj.x.push_back(x);
                    traj.xhat.push_back(xhat);
                    traj.err_norm.push_back((x - xhat).norm());
                    traj.fhat_at_x1.push_back(basis.evaluate(alpha, x(0)));
                    traj.alpha.push_back(std::move(alpha));
                  });
  return traj;
}

PlantTrajectory simulate_plant(const PlantModel& plant, const RunSettings& run,
                               const Eigen::Vector2d& x0, const Nonlinearity& truth) {
  if (run.record_stride < 1) throw DomainError("simulate_plant: record_stride must be >= 1");
  const Nonlinearity f = truth ? truth : plant_nonlinearity(plant);
  auto rhs = [&](double t, const StateVector& y, StateVector& dydt) {
    const Eigen::Vector2d x = y.segment<2>(0);
    dydt = plant.A * x + plant.B_vec * plant.input(t) + plant.B_N_vec * f(x(0));
  };
  PlantTrajectory out;
  const long long steps = step_count(0.0, run.t_final, run.dt);
  StateVector y0 = x0;
  integrate_fixed(rhs, y0, 0.0, run.t_final, run.dt,
                  [&](long long step, double t, const StateVector& y) {
                    if (step % run.record_stride != 0 && step != steps) return;
                    out.t.push_back(t);
                    out.x.emplace_back(y(0), y(1));
                  });
  return out;
}

ErrorReport error_diagnostics(const Trajectory& traj, const Nonlinearity& truth,
                              const KernelBasis& basis, int grid_points) {
  if (traj.size() == 0) throw DomainError("error_diagnostics: empty trajectory");
  if (grid_points < 512) throw DomainError("error_diagnostics: grid_points must be >= 512");

  ErrorReport report;
  report.state_error = traj.err_norm;
  const auto [lo, hi] = std::minmax_element(basis.centers().begin(), basis.centers().end());
  report.omega = Interval{*lo, *hi};

  const Eigen::VectorXd& alpha_T = traj.alpha.back();
  const double span = report.omega.width();
  double sum_sq = 0.0;
  for (int i = 0; i < grid_points; ++i) {
    const double x =
        span > 0.0 ? report.omega.lo + span * i / (grid_points - 1.0) : report.omega.lo;
    const double fx = truth(x);
    const double err = std::abs(fx - basis.evaluate(alpha_T, x));
    report.sup_error = std::max(report.sup_error, err);
    report.sup_truth = std::max(report.sup_truth, std::abs(fx));
    sum_sq += err * err;
  }
  report.rms_error = std::sqrt(sum_sq / grid_points);

  // Flanks outside omega; reported, never asserted.
  for (int i = 1; i <= grid_points; ++i) {
    const double offset = 0.5 * span * i / grid_points;
    for (double x : {report.omega.lo - offset, report.omega.hi + offset}) {
      const double err = std::abs(truth(x) - basis.evaluate(alpha_T, x));
      report.sup_error_outside = std::max(report.sup_error_outside, err);
    }
  }

  const Eigen::VectorXd& alpha_09 = traj.alpha[traj.index_at(0.9 * traj.t.back())];
  report.coefficient_drift = (alpha_T - alpha_09).norm();
  report.coefficient_drift_max = (alpha_T - alpha_09).cwiseAbs().maxCoeff();
  report.max_abs_alpha = alpha_T.cwiseAbs().maxCoeff();
  return report;
}

ErrorReport error_diagnostics(const Trajectory& traj, const PlantModel& plant,
                              const KernelBasis& basis, int grid_points) {
  return error_diagnostics(traj, plant_nonlinearity(plant), basis, grid_points);
}

std::vector<double> lyapunov_surrogate(const Trajectory& traj, const Eigen::Matrix2d& P,
                                       double gamma, const KernelBasis& basis,
                                       const Eigen::VectorXd& alpha_true) {
  std::vector<double> out;
  out.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const Eigen::Vector2d e = traj.x[i] - traj.xhat[i];
    const Eigen::VectorXd a = alpha_true - traj.alpha[i];
    out.push_back(e.dot(P * e) + gamma * basis.rkhs_norm_squared(a));
  }
  return out;
}

}  // namespace piezo
