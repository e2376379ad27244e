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

#include <iosfwd>
#include <span>
#include <string>

#include "piezo_rkhs/beam_model.hpp"
#include "piezo_rkhs/config.hpp"
#include "piezo_rkhs/estimator.hpp"
#include "piezo_rkhs/pe_analysis.hpp"
#include "piezo_rkhs/rkhs.hpp"

namespace piezo {

/// 2 pi / omega of the base excitation.
double forcing_period(const PlantModel& plant);

/// Plant-only run settings; an unset t_final becomes 100 forcing periods.
RunSettings simulation_settings(const ExperimentConfig& cfg, const PlantModel& plant);

/// kernel.omega when given, otherwise the settled x1 range of a plant run
/// from the estimator's initial state.
Interval resolve_omega(const ExperimentConfig& cfg, const PlantModel& plant);

/// Kernel width implied by the profile for n centers spanning omega.
double resolve_sigma(const KernelSettings& kernel, Interval omega);

KernelBasis build_basis(const KernelSettings& kernel, Interval omega);

/// Everything a coupled run needs, resolved from a config.
struct EstimationSetup {
  DerivedModel model;
  Interval omega;
  KernelBasis basis;
  Nonlinearity truth;
  Eigen::VectorXd alpha_true;  ///< set only for a manufactured truth
  EstimatorConfig estimator;
  RunSettings run;
};

EstimationSetup prepare_estimation(const ExperimentConfig& cfg);

/// PE audit parameters for a recorded x1(t); auto values are filled in from
/// the basis spacing, the forcing period and the settling fraction. An
/// epsilon that breaks the spacing bound raises ConfigError("pe.epsilon").
PeAuditConfig resolve_pe(const PeSettings& pe, const PlantModel& plant, const KernelBasis& basis,
                         std::span<const double> t);

/// Prints name,value rows for every derived constant.
void cmd_derive(const ExperimentConfig& cfg, std::ostream& out);

/// Writes <out_dir>/plant.csv and prints the settled displacement range.
/// Returns that range.
Interval cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log);

/// Writes <out_dir>/trajectory.csv and <out_dir>/function_estimate.csv and
/// prints a one-line summary.
ErrorReport cmd_estimate(const ExperimentConfig& cfg, const std::string& out_dir,
                         std::ostream& log);

/// Audits a trajectory CSV (columns t and x1). Writes <out_dir>/pe_audit.csv
/// and prints a one-line summary.
PeAuditReport cmd_pe_check(const ExperimentConfig& cfg, const std::string& trajectory_path,
                           const std::string& out_dir, std::ostream& log);

}  // namespace piezo
