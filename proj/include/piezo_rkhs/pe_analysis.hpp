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

#include <span>
#include <vector>

#include "piezo_rkhs/rkhs.hpp"

namespace piezo {

struct PeAuditConfig {
  double epsilon = 0.0;      ///< ball radius around each center, m
  double delta = 0.0;        ///< window length, s
  double t_start = 0.0;      ///< first window start, s
  double min_measure = 0.0;  ///< pass threshold on every dwell measure, s

  /// epsilon must stay below half the smallest center spacing.
  void validate(std::span<const double> centers) const;
};

/// [min, max] of x1 after dropping the first settle_fraction of samples.
Interval extract_omega(std::span<const double> x1, double settle_fraction);

struct DwellMeasure {
  double window_start = 0.0;
  std::size_t center_index = 0;
  double measure = 0.0;
};

struct PeAuditReport {
  std::vector<DwellMeasure> measures;  ///< window-major, then center
  std::size_t window_count = 0;
  double min_measure = 0.0;            ///< over all windows and centers
  std::size_t worst_center = 0;
  double worst_window_start = 0.0;
  bool passed = false;
};

/// Sufficient persistence-of-excitation audit for a radial basis: tiles
/// [t_start, t_end] with windows of length delta (only whole windows) and,
/// for every window and center, measures the time the sampled trajectory
/// spends within epsilon of the center. Samples must be uniform in time.
PeAuditReport audit_pe(std::span<const double> t, std::span<const double> x1,
                       std::span<const double> centers, const PeAuditConfig& cfg);

}  // namespace piezo
