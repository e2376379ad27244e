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

#include "piezo_rkhs/integrator.hpp"

#include <cmath>

namespace piezo {

void OdeProblem::validate() const {
  if (dimension < 1) throw DomainError("OdeProblem: dimension must be >= 1");
  if (!rhs) throw DomainError("OdeProblem: rhs is empty");
  if (y0.size() != dimension) throw DimensionError("OdeProblem: y0 does not match dimension");
  if (!(dt > 0.0)) throw DomainError("OdeProblem: dt must be positive");
  if (!(t_final > t0)) throw DomainError("OdeProblem: t_final must exceed t0");
  if (record_stride < 1) throw DomainError("OdeProblem: record_stride must be >= 1");
}

StateVector rk4_step(const OdeRhs& rhs, double t, const StateVector& y, double dt) {
  if (!(dt > 0.0)) throw DomainError("rk4_step: dt must be positive");
  Rk4Workspace ws;
  ws.resize(y.size());
  StateVector out = y;
  rk4_step_inplace(
      [&](double ti, const StateVector& yi, StateVector& dydt) {
        rhs(ti, yi, dydt);
        if (!dydt.allFinite()) {
          throw NumericalError("rk4_step: non-finite derivative at t = " + std::to_string(ti));
        }
      },
      t, out, dt, ws);
  return out;
}

long long step_count(double t0, double t_final, double dt) {
  const double ratio = (t_final - t0) / dt;
  const double nearest = std::round(ratio);
  // Treat ratios within rounding of an integer as exact so that, e.g.,
  // t_final = 1 with dt = 1e-3 takes 1000 full steps.
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) {
    return std::max(1LL, static_cast<long long>(nearest));
  }
  return static_cast<long long>(std::ceil(ratio));
}

OdeSolution integrate(const OdeProblem& problem) {
  problem.validate();
  OdeSolution out;
  const long long steps = step_count(problem.t0, problem.t_final, problem.dt);
  const long long stride = problem.record_stride;
  out.t.reserve(static_cast<std::size_t>(steps / stride + 2));
  out.y.reserve(static_cast<std::size_t>(steps / stride + 2));
  auto rhs = [&](double t, const StateVector& y, StateVector& dydt) {
    problem.rhs(t, y, dydt);
    if (!dydt.allFinite()) {
      throw DivergenceError(t, "rhs produced a non-finite derivative at t = " + std::to_string(t));
    }
  };
  integrate_fixed(rhs, problem.y0, problem.t0, problem.t_final, problem.dt,
                  [&](long long k, double t, const StateVector& y) {
                    if (k % stride == 0 || k == steps) {
                      out.t.push_back(t);
                      out.y.push_back(y);
                    }
                  });
  return out;
}

}  // namespace piezo
