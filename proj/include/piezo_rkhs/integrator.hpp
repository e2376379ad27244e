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
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

using StateVector = Eigen::VectorXd;

/// dy/dt = rhs(t, y), written into `dydt` (already sized).
using OdeRhs = std::function<void(double t, const StateVector& y, StateVector& dydt)>;

struct OdeProblem {
  int dimension = 0;
  OdeRhs rhs;
  StateVector y0;
  double t0 = 0.0;
  double t_final = 0.0;
  double dt = 0.0;
  int record_stride = 1;

  void validate() const;
};

/// Recorded samples. Both endpoints are always present.
struct OdeSolution {
  std::vector<double> t;
  std::vector<StateVector> y;
};

/// Scratch space for rk4_step so the hot loop does not allocate.
struct Rk4Workspace {
  StateVector k1, k2, k3, k4, tmp;

  void resize(Eigen::Index n) {
    k1.resize(n);
    k2.resize(n);
    k3.resize(n);
    k4.resize(n);
    tmp.resize(n);
  }
};

/// One classical RK4 step, in place.
template <class Rhs>
void rk4_step_inplace(Rhs&& rhs, double t, StateVector& y, double dt, Rk4Workspace& ws) {
  const double half = 0.5 * dt;
  rhs(t, y, ws.k1);
  ws.tmp = y + half * ws.k1;
  rhs(t + half, ws.tmp, ws.k2);
  ws.tmp = y + half * ws.k2;
  rhs(t + half, ws.tmp, ws.k3);
  ws.tmp = y + dt * ws.k3;
  rhs(t + dt, ws.tmp, ws.k4);
  y += (dt / 6.0) * (ws.k1 + 2.0 * ws.k2 + 2.0 * ws.k3 + ws.k4);
}

/// One classical RK4 step. Deterministic: identical inputs give identical
/// bits.
StateVector rk4_step(const OdeRhs& rhs, double t, const StateVector& y, double dt);

/// Number of steps on [t0, t_final]; the last one may be shortened.
long long step_count(double t0, double t_final, double dt);

/// Time of grid point k. Computed by multiplication so that long runs do
/// not accumulate rounding in t.
inline double grid_time(double t0, double t_final, double dt, long long k, long long steps) {
  return k >= steps ? t_final : t0 + static_cast<double>(k) * dt;
}

/// Fixed-step driver. `observer(k, t, y)` is called for grid point 0 and
/// after every step; the caller decides what to keep. Throws
/// DivergenceError when the state stops being finite.
template <class Rhs, class Observer>
void integrate_fixed(Rhs&& rhs, StateVector y, double t0, double t_final, double dt,
                     Observer&& observer) {
  if (!(dt > 0.0)) throw DomainError("integrate: dt must be positive");
  if (!(t_final > t0)) throw DomainError("integrate: t_final must exceed t0");
  const long long steps = step_count(t0, t_final, dt);
  Rk4Workspace ws;
  ws.resize(y.size());
  observer(0LL, t0, static_cast<const StateVector&>(y));
  for (long long k = 0; k < steps; ++k) {
    const double t = grid_time(t0, t_final, dt, k, steps);
    const double t_next = grid_time(t0, t_final, dt, k + 1, steps);
    rk4_step_inplace(rhs, t, y, t_next - t, ws);
    if (!y.allFinite()) {
      throw DivergenceError(t_next, "integration diverged (non-finite state) at t = " +
                                        std::to_string(t_next));
    }
    observer(k + 1, t_next, static_cast<const StateVector&>(y));
  }
}

/// Integrates `problem` and keeps every record_stride-th sample plus the
/// final one.
OdeSolution integrate(const OdeProblem& problem);

}  // namespace piezo
