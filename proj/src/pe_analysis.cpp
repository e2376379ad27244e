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

#include "piezo_rkhs/pe_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

void PeAuditConfig::validate(std::span<const double> centers) const {
  if (!(epsilon > 0.0)) throw ValidationError("pe epsilon must be positive");
  if (!(delta > 0.0)) throw ValidationError("pe delta must be positive");
  if (!(min_measure >= 0.0)) throw ValidationError("pe min_measure must be non-negative");
  if (centers.size() >= 2) {
    std::vector<double> sorted(centers.begin(), centers.end());
    std::sort(sorted.begin(), sorted.end());
    double spacing = std::numeric_limits<double>::infinity();
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      spacing = std::min(spacing, sorted[i] - sorted[i - 1]);
    }
    if (!(epsilon < 0.5 * spacing)) {
      char msg[160];
      std::snprintf(msg, sizeof msg,
                    "pe epsilon %.6g violates epsilon < min center spacing / 2 = %.6g", epsilon,
                    0.5 * spacing);
      throw ValidationError(msg);
    }
  }
}

Interval extract_omega(std::span<const double> x1, double settle_fraction) {
  if (!(settle_fraction > 0.0 && settle_fraction < 1.0)) {
    throw DomainError("extract_omega: settle_fraction must lie in (0, 1)");
  }
  const auto skip = static_cast<std::size_t>(std::floor(settle_fraction * x1.size()));
  if (skip >= x1.size()) throw DomainError("extract_omega: no samples left after settling");
  const auto tail = x1.subspan(skip);
  const auto [lo, hi] = std::minmax_element(tail.begin(), tail.end());
  return Interval{*lo, *hi};
}

PeAuditReport audit_pe(std::span<const double> t, std::span<const double> x1,
                       std::span<const double> centers, const PeAuditConfig& cfg) {
  cfg.validate(centers);
  if (t.size() != x1.size()) throw DimensionError("audit_pe: t and x1 lengths differ");
  if (t.size() < 2) throw DomainError("audit_pe: need at least two samples");
  if (centers.empty()) throw DomainError("audit_pe: no centers");

  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) throw DomainError("audit_pe: time must increase");
  for (std::size_t i = 2; i < t.size(); ++i) {
    // the integrator's shortened last step is the only allowed exception
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt && i + 1 != t.size()) {
      throw DomainError("audit_pe: samples are not uniform in time near row " +
                        std::to_string(i));
    }
  }
  if (cfg.delta < dt) throw DomainError("audit_pe: delta is shorter than one sample");

  const double t_end = t.back();
  const auto windows = static_cast<std::size_t>(std::floor((t_end - cfg.t_start) / cfg.delta +
                                                           1e-9));
  if (cfg.t_start < t.front() || windows == 0) {
    throw DomainError("audit_pe: no whole window of length delta fits after t_start");
  }

  PeAuditReport report;
  report.window_count = windows;
  std::vector<std::size_t> counts(windows * centers.size(), 0);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (t[i] < cfg.t_start) continue;
    const auto w = static_cast<std::size_t>(std::floor((t[i] - cfg.t_start) / cfg.delta));
    if (w >= windows) continue;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      if (std::abs(x1[i] - centers[c]) <= cfg.epsilon) ++counts[w * centers.size() + c];
    }
  }

  report.min_measure = std::numeric_limits<double>::infinity();
  report.measures.reserve(counts.size());
  for (std::size_t w = 0; w < windows; ++w) {
    const double start = cfg.t_start + static_cast<double>(w) * cfg.delta;
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double measure = dt * static_cast<double>(counts[w * centers.size() + c]);
      report.measures.push_back({start, c, measure});
      if (measure < report.min_measure) {
        report.min_measure = measure;
        report.worst_center = c;
        report.worst_window_start = start;
      }
    }
  }
  report.passed = report.min_measure >= cfg.min_measure && report.min_measure > 0.0;
  return report;
}

}  // namespace piezo
