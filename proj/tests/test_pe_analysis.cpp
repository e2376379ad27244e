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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "piezo_rkhs/beam_model.hpp"
#include "piezo_rkhs/errors.hpp"
#include "piezo_rkhs/estimator.hpp"
#include "piezo_rkhs/experiment.hpp"
#include "piezo_rkhs/pe_analysis.hpp"
#include "test_support.hpp"

using namespace piezo;

namespace {

struct Samples {
  std::vector<double> t, x;
};

Samples sine(double amplitude, double w, double t_final, double dt) {
  Samples s;
  const auto n = static_cast<std::size_t>(std::llround(t_final / dt));
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) * dt;
    s.t.push_back(t);
    s.x.push_back(amplitude * std::sin(w * t));
  }
  return s;
}

Samples constant(double value, double t_final, double dt) {
  Samples s = sine(0.0, 0.0, t_final, dt);
  std::fill(s.x.begin(), s.x.end(), value);
  return s;
}

PeAuditConfig audit(double epsilon, double delta, double t_start = 0.0) {
  PeAuditConfig c;
  c.epsilon = epsilon;
  c.delta = delta;
  c.t_start = t_start;
  return c;
}

}  // namespace

TEST_SUITE("pe_analysis") {

TEST_CASE("a center the trajectory never visits has zero dwell") {
  const Samples s = sine(1.0, 2.0 * std::numbers::pi, 4.0, 1e-3);
  const std::vector<double> centers{-0.5, 0.0, 0.5, 3.0};
  const PeAuditReport r = audit_pe(s.t, s.x, centers, audit(0.1, 1.0));
  CHECK(r.window_count == 4);
  CHECK(r.measures.size() == 16);
  CHECK_FALSE(r.passed);
  CHECK(r.min_measure == 0.0);
  CHECK(r.worst_center == 3);
  for (const auto& m : r.measures) {
    if (m.center_index == 3) {
      CHECK(m.measure == 0.0);
    } else {
      CHECK(m.measure > 0.0);
    }
  }
}

TEST_CASE("a constant trajectory dwells the whole window at its own center") {
  const Samples s = constant(0.25, 2.0, 1e-3);
  const std::vector<double> centers{0.0, 0.25, 0.5};
  const PeAuditReport r = audit_pe(s.t, s.x, centers, audit(0.1, 0.5));
  CHECK(r.window_count == 4);
  for (const auto& m : r.measures) {
    if (m.center_index == 1) {
      CHECK(m.measure == doctest::Approx(0.5).epsilon(1e-9));
    } else {
      CHECK(m.measure == 0.0);
    }
  }
  CHECK_FALSE(r.passed);
}

TEST_CASE("configuration errors") {
  const Samples s = sine(1.0, 1.0, 2.0, 1e-3);
  const std::vector<double> centers{0.0, 0.2};
  CHECK_THROWS_AS(audit_pe(s.t, s.x, centers, audit(0.1, 0.5)), ValidationError);
  CHECK_THROWS_WITH_AS(audit_pe(s.t, s.x, centers, audit(0.15, 0.5)),
                       doctest::Contains("epsilon"), ValidationError);
  CHECK_THROWS_AS(audit_pe(s.t, s.x, centers, audit(0.0, 0.5)), ValidationError);
  CHECK_THROWS_AS(audit_pe(s.t, s.x, centers, audit(0.05, 5e-4)), DomainError);
  CHECK_THROWS_AS(audit_pe(s.t, s.x, centers, audit(0.05, 3.0)), DomainError);
  CHECK_THROWS_AS(audit_pe(s.t, s.x, centers, audit(0.05, 0.5, -1.0)), DomainError);

  Samples uneven = s;
  uneven.t[10] += 4e-4;
  CHECK_THROWS_AS(audit_pe(uneven.t, uneven.x, centers, audit(0.05, 0.5)), DomainError);

  std::vector<double> short_x(s.x.begin(), s.x.end() - 1);
  CHECK_THROWS_AS(audit_pe(s.t, short_x, centers, audit(0.05, 0.5)), DimensionError);
}

TEST_CASE("a shortened final sample is accepted") {
  Samples s = sine(1.0, 1.0, 2.0, 1e-3);
  s.t.push_back(s.t.back() + 4e-4);
  s.x.push_back(s.x.back());
  const std::vector<double> centers{0.0};
  CHECK_NOTHROW(audit_pe(s.t, s.x, centers, audit(0.05, 0.5)));
}

TEST_CASE("range extraction") {
  const std::vector<double> x{5.0, -5.0, 0.1, -0.2, 0.3, 0.0};
  const Interval a = extract_omega(x, 0.5);
  CHECK(a.lo == -0.2);
  CHECK(a.hi == 0.3);
  const Interval b = extract_omega(x, 0.1);
  CHECK(b.lo == -5.0);
  CHECK(b.hi == 5.0);
  CHECK_THROWS_AS(extract_omega(x, 0.0), DomainError);
  CHECK_THROWS_AS(extract_omega(x, 1.0), DomainError);
  CHECK_THROWS_AS(extract_omega(std::vector<double>{}, 0.5), DomainError);
}

TEST_CASE("larger balls never shrink the dwell measure") {
  const Samples s = sine(1.0, 2.0 * std::numbers::pi, 5.0, 1e-3);
  const std::vector<double> centers{-0.8, -0.3, 0.0, 0.4, 0.9};
  const PeAuditReport small = audit_pe(s.t, s.x, centers, audit(0.05, 1.0));
  const PeAuditReport large = audit_pe(s.t, s.x, centers, audit(0.09, 1.0));
  REQUIRE(small.measures.size() == large.measures.size());
  for (std::size_t i = 0; i < small.measures.size(); ++i) {
    CHECK(large.measures[i].measure >= small.measures[i].measure);
  }
}

TEST_CASE("doubling the window adds the dwell of its halves") {
  const Samples s = sine(1.0, 2.0 * std::numbers::pi * 0.7, 8.0, 1e-3);
  const std::vector<double> centers{-0.6, 0.0, 0.6};
  const PeAuditReport half = audit_pe(s.t, s.x, centers, audit(0.1, 1.0));
  const PeAuditReport full = audit_pe(s.t, s.x, centers, audit(0.1, 2.0));
  REQUIRE(full.window_count * 2 == half.window_count);
  for (std::size_t w = 0; w < full.window_count; ++w) {
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const double sum = half.measures[(2 * w) * 3 + c].measure +
                         half.measures[(2 * w + 1) * 3 + c].measure;
      CHECK(full.measures[w * 3 + c].measure == doctest::Approx(sum).epsilon(1e-12));
    }
  }
}

TEST_CASE("dwell time follows the local speed") {
  const double w = 2.0 * std::numbers::pi;
  const Samples s = sine(1.0, w, 1.0, 1e-5);
  const double eps = 0.01;
  const std::vector<double> centers{0.0, 0.5, 1.0};
  const PeAuditReport r = audit_pe(s.t, s.x, centers, audit(eps, 1.0));
  // two crossings per period at speed w cos(asin(c))
  const double at_zero = 2.0 * (2.0 * eps / w);
  const double at_half = 2.0 * (2.0 * eps / (w * std::cos(std::asin(0.5))));
  CHECK(r.measures[0].measure == doctest::Approx(at_zero).epsilon(0.2));
  CHECK(r.measures[1].measure == doctest::Approx(at_half).epsilon(0.2));
  // the turning point is where the trajectory lingers longest
  CHECK(r.measures[2].measure > r.measures[1].measure);
  CHECK(r.measures[1].measure > r.measures[0].measure);
}

TEST_CASE("the settled baseline response passes the audit") {
  const PlantModel plant = derive_model(table1_config()).plant;
  const double period = forcing_period(plant);
  const PlantTrajectory traj = simulate_plant(plant, {100.0 * period, 1e-3, 1});
  std::vector<double> x1;
  for (const auto& x : traj.x) x1.push_back(x(0));
  const Interval omega = extract_omega(x1, 0.5);
  const KernelBasis basis = make_basis(omega, 24, omega.width() / 23.0);
  PeAuditConfig c = audit(0.4 * basis.min_spacing(), period,
                          traj.t[static_cast<std::size_t>(0.5 * traj.t.size())]);
  const PeAuditReport r = audit_pe(traj.t, x1, basis.centers(), c);
  CHECK(r.window_count >= 49);
  CHECK(r.passed);
  CHECK(r.min_measure > 0.0);
}

}  // TEST_SUITE
