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

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "piezo_rkhs/config.hpp"
#include "piezo_rkhs/csv.hpp"
#include "piezo_rkhs/errors.hpp"
#include "test_support.hpp"

using namespace piezo;
namespace fs = std::filesystem;

namespace {

using testing::read_file;
using testing::with_line;

std::string table1_text() { return testing::shipped_config("table1.cfg"); }

std::string config_error_key(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

fs::path temp_dir() {
  const fs::path dir = fs::temp_directory_path() / "piezo_rkhs_config_csv";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("config_csv") {

TEST_CASE("the shipped baseline config matches the built-in values") {
  const ExperimentConfig cfg = parse_config(table1_text());
  const MaterialGeometryConfig want = table1_config();
  const MaterialGeometryConfig& got = cfg.material;
  CHECK(got.rho_s == want.rho_s);
  CHECK(got.h_s == want.h_s);
  CHECK(got.C_b == want.C_b);
  CHECK(got.l == want.l);
  CHECK(got.width == want.width);
  CHECK(got.rho_p == want.rho_p);
  CHECK(got.h_p == want.h_p);
  CHECK(got.patch_start == want.patch_start);
  CHECK(got.patch_end == want.patch_end);
  CHECK(got.d31_0 == want.d31_0);
  CHECK(got.d31_1 == want.d31_1);
  CHECK(got.d31_2 == want.d31_2);
  CHECK(got.Ep_0 == want.Ep_0);
  CHECK(got.Ep_1 == want.Ep_1);
  CHECK(got.Ep_2 == want.Ep_2);
  CHECK(got.eps33 == want.eps33);
  CHECK(got.damp_alpha == want.damp_alpha);
  CHECK(got.damp_beta == want.damp_beta);
  CHECK(got.input_amplitude == want.input_amplitude);
  CHECK(got.input_omega == want.input_omega);
  CHECK(got.mode_tip_value == 2.0);
  CHECK(got.mass_includes_width);

  CHECK(cfg.kernel.profile == KernelProfile::Overlapping);
  CHECK(cfg.kernel.n == 24);
  CHECK_FALSE(cfg.kernel.omega.has_value());
  CHECK_FALSE(cfg.estimator.gamma.has_value());
  CHECK(cfg.estimator.gamma0 == 2e-5);
  CHECK(cfg.estimator.q_matrix == Eigen::Matrix2d::Identity());
  CHECK(cfg.estimator.truth == TruthKind::Plant);
  CHECK(cfg.estimator.record_stride == 1000);
  CHECK_FALSE(cfg.pe.epsilon.has_value());
  CHECK(cfg.output_dir == "out/table1");
}

TEST_CASE("missing, unknown and duplicate keys name the key") {
  const std::string base = table1_text();
  CHECK(config_error_key(with_line(base, "material.eps33", "")) == "material.eps33");
  CHECK(config_error_key(with_line(base, "kernel.profile", "")) == "kernel.profile");
  CHECK(config_error_key(with_line(base, "estimator.t_final", "")) == "estimator.t_final");
  CHECK(config_error_key(base + "material.colour = red\n") == "material.colour");
  CHECK(config_error_key(base + "kernel.n = 12\n") == "kernel.n");
  CHECK(config_error_key(with_line(base, "material.l", "material.l = long")) == "material.l");
  CHECK(config_error_key(with_line(base, "kernel.profile", "kernel.profile = wide")) ==
        "kernel.profile");
  CHECK(config_error_key(with_line(base, "estimator.truth", "estimator.truth = oracle")) ==
        "estimator.truth");
  CHECK(config_error_key(with_line(base, "estimator.q", "estimator.q = 1, 2, 3")) ==
        "estimator.q");
  CHECK(config_error_key(with_line(base, "estimator.q", "estimator.q = 1, -1")) ==
        "estimator.q");
  CHECK(config_error_key(with_line(base, "estimator.dt", "estimator.dt = 0")) == "estimator.dt");
  CHECK(config_error_key(with_line(base, "kernel.omega", "kernel.omega = 1e-4, -1e-4")) ==
        "kernel.omega");
  CHECK(config_error_key(with_line(base, "material.l", "material.l = -0.4")) == "material");

  try {
    parse_config(with_line(base, "material.eps33", ""));
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("material.eps33") != std::string::npos);
  }
}

TEST_CASE("gain settings") {
  const std::string base = table1_text();
  // auto needs gamma0
  CHECK(config_error_key(with_line(base, "estimator.gamma0", "")) == "estimator.gamma0");
  // gamma0 is refused next to an explicit gain
  CHECK(config_error_key(with_line(base, "estimator.gamma", "estimator.gamma = 1e-4")) ==
        "estimator.gamma0");
  const std::string fixed = with_line(with_line(base, "estimator.gamma", "estimator.gamma = 1e-4"),
                                      "estimator.gamma0", "");
  const ExperimentConfig cfg = parse_config(fixed);
  REQUIRE(cfg.estimator.gamma.has_value());
  CHECK(*cfg.estimator.gamma == 1e-4);
  CHECK(config_error_key(with_line(fixed, "estimator.gamma", "estimator.gamma = -1")) ==
        "estimator.gamma");
}

TEST_CASE("kernel settings") {
  const std::string base = table1_text();
  CHECK(config_error_key(base + "kernel.sigma = 1e-5\n") == "kernel.sigma");
  const std::string explicit_sigma =
      with_line(base, "kernel.profile", "kernel.profile = explicit") + "kernel.sigma = 1e-5\n";
  const ExperimentConfig cfg = parse_config(explicit_sigma);
  CHECK(cfg.kernel.profile == KernelProfile::Explicit);
  CHECK(cfg.kernel.sigma == 1e-5);
  CHECK(config_error_key(with_line(base, "kernel.profile", "kernel.profile = explicit")) ==
        "kernel.sigma");

  const ExperimentConfig fixed =
      parse_config(with_line(base, "kernel.omega", "kernel.omega = -2e-4, 3e-4"));
  REQUIRE(fixed.kernel.omega.has_value());
  CHECK(fixed.kernel.omega->lo == -2e-4);
  CHECK(fixed.kernel.omega->hi == 3e-4);

  CHECK(parse_profile("paper-literal") == KernelProfile::PaperLiteral);
  CHECK(profile_name(KernelProfile::Overlapping) == "overlapping");
}

TEST_CASE("comments, blank lines and spacing") {
  const std::string base = table1_text();
  std::string text = "# leading comment\n\n   \n" +
                     with_line(base, "material.h_s", "material.h_s=0.003   # inline note");
  const ExperimentConfig cfg = parse_config(text);
  CHECK(cfg.material.h_s == 0.003);
  CHECK(config_error_key(base + "just some words\n").empty());
}

TEST_CASE("doubles survive a text round trip") {
  std::mt19937_64 rng(99);
  std::uniform_int_distribution<std::uint64_t> bits;
  int checked = 0;
  while (checked < 2000) {
    const std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
    ++checked;
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(-0.0) == "-0");
  CHECK(format_double(1e300) == "1.0000000000000001e+300");
}

TEST_CASE("trajectory CSV round trip") {
  Trajectory traj;
  for (int i = 0; i < 5; ++i) {
    traj.t.push_back(0.001 * i);
    traj.x.emplace_back(1e-5 * i, -0.3 * i);
    traj.xhat.emplace_back(1e-5 * i + 1e-9, 0.1);
    traj.err_norm.push_back((traj.x.back() - traj.xhat.back()).norm());
    traj.fhat_at_x1.push_back(-1.0 / 3.0 * i);
    traj.alpha.push_back(Eigen::VectorXd::LinSpaced(3, -i, i / 7.0));
  }
  const std::string path = (temp_dir() / "trajectory.csv").string();
  write_trajectory_csv(path, traj);
  const std::string raw = read_file(path);
  CHECK(raw.find('\r') == std::string::npos);
  CHECK(raw.rfind("t,x1,x2,xhat1,xhat2,err_norm,fhat_at_x1,alpha_0,alpha_1,alpha_2\n", 0) == 0);

  const CsvTable table = read_csv(path);
  REQUIRE(table.rows.size() == 5);
  const auto x1 = table.column("x1");
  const auto a2 = table.column("alpha_2");
  for (int i = 0; i < 5; ++i) {
    CHECK(x1[i] == traj.x[i](0));
    CHECK(a2[i] == traj.alpha[i](2));
    CHECK(table.rows[i][0] == traj.t[i]);
    CHECK(table.rows[i][6] == traj.fhat_at_x1[i]);
  }
  CHECK_THROWS_AS(table.column("x3"), ParseError);
}

TEST_CASE("malformed CSV input reports the row") {
  auto row_of = [](const std::string& text) -> std::size_t {
    try {
      parse_csv(text);
    } catch (const ParseError& e) {
      return e.row();
    }
    return 0;
  };
  CHECK(row_of("t,x1\n0,1\n0.1,abc\n") == 3);
  CHECK(row_of("t,x1\n0,1\n0.1\n") == 3);
  CHECK(row_of("t,x1\n0,1,2\n") == 2);
  CHECK(row_of("t,x1\n0,1\n\n0.2,3\n") == 3);
  CHECK(row_of("t,x1\n0,\n") == 2);
  CHECK(row_of("") == 1);

  const CsvTable ok = parse_csv("t,x1\r\n0,1\r\n0.5,-2e-3\n");
  REQUIRE(ok.rows.size() == 2);
  CHECK(ok.rows[1][1] == -2e-3);
  CHECK_THROWS_AS(read_csv((temp_dir() / "does_not_exist.csv").string()), ValidationError);
}

TEST_CASE("CSV writer checks row width") {
  const std::string path = (temp_dir() / "width.csv").string();
  CsvWriter w(path, {"a", "b"});
  CHECK_THROWS_AS(w.row({1.0}), DimensionError);
  w.row({1.0, 2.0});
  w.close();
  CHECK(read_file(path) == "a,b\n1,2\n");
  CHECK_THROWS_AS(CsvWriter("/nonexistent-dir/x.csv", {"a"}), ValidationError);
}

}  // TEST_SUITE
