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
#include <optional>
#include <string>
#include <string_view>

#include "piezo_rkhs/beam_model.hpp"
#include "piezo_rkhs/rkhs.hpp"

namespace piezo {

enum class KernelProfile {
  Overlapping,   ///< sigma equal to the center spacing
  PaperLiteral,  ///< sigma = 1e-9
  Explicit,      ///< sigma taken from kernel.sigma
};

inline constexpr double kPaperLiteralSigma = 1e-9;

KernelProfile parse_profile(std::string_view name);
std::string_view profile_name(KernelProfile profile);

struct KernelSettings {
  KernelProfile profile = KernelProfile::Overlapping;
  double sigma = 0.0;  ///< only read for the explicit profile
  std::size_t n = 24;
  std::optional<Interval> omega;  ///< empty means extract from a plant run
  double regularization = 0.0;
};

enum class TruthKind {
  Plant,         ///< the plant's polynomial nonlinearity
  Manufactured,  ///< its kernel interpolant, which lies in the basis span
};

struct EstimatorSettings {
  std::optional<double> gamma;  ///< empty means auto: gamma0 * max(1, sup|f| on omega)
  double gamma0 = 1.0;
  Eigen::Matrix2d q_matrix = Eigen::Matrix2d::Identity();
  double dt = 1e-3;
  double t_final = 0.0;
  int record_stride = 1;
  Eigen::Vector2d x0 = Eigen::Vector2d::Zero();
  Eigen::Vector2d xhat0 = Eigen::Vector2d::Zero();
  double alpha0 = 0.0;  ///< every coefficient starts here
  TruthKind truth = TruthKind::Plant;
};

/// Plant-only run. It also supplies omega when kernel.omega = auto.
struct SimulateSettings {
  std::optional<double> t_final;  ///< empty means 100 forcing periods
  double dt = 1e-3;
  int record_stride = 1;
};

struct PeSettings {
  std::optional<double> epsilon;  ///< empty means 0.4 * center spacing
  std::optional<double> delta;    ///< empty means one forcing period
  std::optional<double> t_start;  ///< empty means the end of the settling phase
  double settle_fraction = 0.5;
  double min_measure = 0.0;
};

struct ExperimentConfig {
  MaterialGeometryConfig material;
  int quad_points = kDefaultQuadPoints;
  KernelSettings kernel;
  EstimatorSettings estimator;
  SimulateSettings simulate;
  PeSettings pe;
  std::string output_dir = "out";

  /// Range and consistency checks; throws ConfigError naming the key.
  void validate() const;
};

/// Parses the flat `key = value` format. Lines starting with '#' and text
/// after a '#' are comments. Unknown, duplicate and missing required keys
/// raise ConfigError with the key name.
ExperimentConfig parse_config(std::string_view text);

ExperimentConfig load_config(const std::string& path);

}  // namespace piezo
