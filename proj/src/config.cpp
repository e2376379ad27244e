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

#include "piezo_rkhs/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

struct Entry {
  std::string value;
  std::size_t line = 0;
};

class Reader {
 public:
  explicit Reader(std::map<std::string, Entry> entries) : entries_(std::move(entries)) {}

  bool has(const std::string& key) const { return entries_.count(key) != 0; }

  const Entry& raw(const std::string& key) {
    auto it = entries_.find(key);
    if (it == entries_.end()) throw ConfigError(key, "missing required key '" + key + "'");
    used_.insert(key);
    return it->second;
  }

  double number(const std::string& key) { return to_number(key, raw(key)); }

  double number(const std::string& key, double fallback) {
    return has(key) ? number(key) : fallback;
  }

  /// "auto" maps to an empty optional.
  std::optional<double> number_or_auto(const std::string& key) {
    if (!has(key)) return std::nullopt;
    const Entry& e = raw(key);
    if (e.value == "auto") return std::nullopt;
    return to_number(key, e);
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    const Entry& e = raw(key);
    long long out = 0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, out);
    if (ec != std::errc() || ptr != end) fail(key, e, "expected an integer");
    return out;
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Entry& e = raw(key);
    if (e.value == "true") return true;
    if (e.value == "false") return false;
    fail(key, e, "expected true or false");
  }

  std::string text(const std::string& key, const std::string& fallback) {
    return has(key) ? raw(key).value : fallback;
  }

  std::vector<double> list(const std::string& key) {
    const Entry& e = raw(key);
    std::vector<double> out;
    std::string_view rest = e.value;
    while (true) {
      const auto comma = rest.find(',');
      const std::string item(trim(rest.substr(0, comma)));
      out.push_back(to_number(key, Entry{item, e.line}));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    return out;
  }

  Eigen::Vector2d vector2(const std::string& key, const Eigen::Vector2d& fallback) {
    if (!has(key)) return fallback;
    const auto v = list(key);
    if (v.size() != 2) fail(key, entries_.at(key), "expected two comma-separated numbers");
    return {v[0], v[1]};
  }

  [[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& why) const {
    throw ConfigError(key, "line " + std::to_string(e.line) + ": " + key + " = '" + e.value +
                               "': " + why);
  }

  void reject_unused() const {
    for (const auto& [key, e] : entries_) {
      if (!used_.count(key)) {
        throw ConfigError(key, "line " + std::to_string(e.line) + ": unknown key '" + key + "'");
      }
    }
  }

 private:
  double to_number(const std::string& key, const Entry& e) const {
    double out = 0.0;
    const char* end = e.value.data() + e.value.size();
    const auto [ptr, ec] = std::from_chars(e.value.data(), end, out);
    if (ec != std::errc() || ptr != end) fail(key, e, "expected a number");
    if (!std::isfinite(out)) fail(key, e, "must be finite");
    return out;
  }

  std::map<std::string, Entry> entries_;
  std::set<std::string> used_;
};

std::map<std::string, Entry> tokenize(std::string_view text) {
  std::map<std::string, Entry> entries;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);

    if (const auto hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    std::string key(trim(line.substr(0, eq)));
    std::string value(trim(line.substr(eq + 1)));
    if (key.empty()) throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
    if (value.empty()) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": no value for '" + key + "'");
    }
    if (entries.count(key)) {
      throw ConfigError(key, "line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
    }
    entries.emplace(std::move(key), Entry{std::move(value), line_no});
  }
  return entries;
}

}  // namespace

KernelProfile parse_profile(std::string_view name) {
  if (name == "overlapping") return KernelProfile::Overlapping;
  if (name == "paper-literal") return KernelProfile::PaperLiteral;
  if (name == "explicit") return KernelProfile::Explicit;
  throw ConfigError("kernel.profile", "unknown kernel profile '" + std::string(name) +
                                          "' (overlapping, paper-literal or explicit)");
}

std::string_view profile_name(KernelProfile profile) {
  switch (profile) {
    case KernelProfile::Overlapping: return "overlapping";
    case KernelProfile::PaperLiteral: return "paper-literal";
    case KernelProfile::Explicit: return "explicit";
  }
  return "?";
}

ExperimentConfig parse_config(std::string_view text) {
  Reader r(tokenize(text));
  ExperimentConfig cfg;

  MaterialGeometryConfig& m = cfg.material;
  m.rho_s = r.number("material.rho_s");
  m.h_s = r.number("material.h_s");
  m.C_b = r.number("material.C_b");
  m.l = r.number("material.l");
  m.width = r.number("material.width");
  m.rho_p = r.number("material.rho_p");
  m.h_p = r.number("material.h_p");
  m.patch_start = r.number("material.patch_start");
  m.patch_end = r.number("material.patch_end");
  m.d31_0 = r.number("material.d31_0");
  m.d31_1 = r.number("material.d31_1");
  m.d31_2 = r.number("material.d31_2");
  m.Ep_0 = r.number("material.Ep_0");
  m.Ep_1 = r.number("material.Ep_1");
  m.Ep_2 = r.number("material.Ep_2");
  m.eps33 = r.number("material.eps33");
  m.damp_alpha = r.number("material.damp_alpha");
  m.damp_beta = r.number("material.damp_beta");
  m.input_amplitude = r.number("material.input_amplitude");
  m.input_omega = r.number("material.input_omega");
  m.mode_tip_value = r.number("material.mode_tip_value", m.mode_tip_value);
  m.mass_includes_width = r.boolean("material.mass_includes_width", m.mass_includes_width);
  cfg.quad_points = static_cast<int>(r.integer("model.quad_points", cfg.quad_points));

  KernelSettings& k = cfg.kernel;
  k.profile = parse_profile(r.raw("kernel.profile").value);
  if (k.profile == KernelProfile::Explicit) {
    k.sigma = r.number("kernel.sigma");
  } else if (r.has("kernel.sigma")) {
    throw ConfigError("kernel.sigma", "kernel.sigma is only read with kernel.profile = explicit");
  }
  const long long n = r.integer("kernel.n", 24);
  if (n < 1) throw ConfigError("kernel.n", "kernel.n must be >= 1");
  k.n = static_cast<std::size_t>(n);
  if (r.has("kernel.omega") && r.raw("kernel.omega").value != "auto") {
    const auto v = r.list("kernel.omega");
    if (v.size() != 2) throw ConfigError("kernel.omega", "kernel.omega must be 'auto' or 'lo, hi'");
    k.omega = Interval{v[0], v[1]};
  }
  k.regularization = r.number("kernel.regularization", 0.0);

  EstimatorSettings& e = cfg.estimator;
  if (r.raw("estimator.gamma").value == "auto") {
    e.gamma0 = r.number("estimator.gamma0");
  } else {
    e.gamma = r.number("estimator.gamma");
    if (r.has("estimator.gamma0")) {
      throw ConfigError("estimator.gamma0", "estimator.gamma0 is only read with estimator.gamma = auto");
    }
  }
  if (r.has("estimator.q")) {
    const auto q = r.list("estimator.q");
    if (q.size() == 2) {
      e.q_matrix = Eigen::Vector2d(q[0], q[1]).asDiagonal();
    } else if (q.size() == 4) {
      e.q_matrix << q[0], q[1], q[2], q[3];
    } else {
      throw ConfigError("estimator.q", "estimator.q takes 2 (diagonal) or 4 (row-major) numbers");
    }
  }
  e.dt = r.number("estimator.dt", e.dt);
  e.t_final = r.number("estimator.t_final");
  e.record_stride = static_cast<int>(r.integer("estimator.record_stride", e.record_stride));
  e.x0 = r.vector2("estimator.x0", e.x0);
  e.xhat0 = r.vector2("estimator.xhat0", e.xhat0);
  e.alpha0 = r.number("estimator.alpha0", e.alpha0);
  const std::string truth = r.text("estimator.truth", "plant");
  if (truth == "plant") {
    e.truth = TruthKind::Plant;
  } else if (truth == "manufactured") {
    e.truth = TruthKind::Manufactured;
  } else {
    throw ConfigError("estimator.truth", "estimator.truth must be plant or manufactured");
  }

  cfg.simulate.t_final = r.number_or_auto("simulate.t_final");
  cfg.simulate.dt = r.number("simulate.dt", cfg.simulate.dt);
  cfg.simulate.record_stride =
      static_cast<int>(r.integer("simulate.record_stride", cfg.simulate.record_stride));

  cfg.pe.epsilon = r.number_or_auto("pe.epsilon");
  cfg.pe.delta = r.number_or_auto("pe.delta");
  cfg.pe.t_start = r.number_or_auto("pe.t_start");
  cfg.pe.settle_fraction = r.number("pe.settle_fraction", cfg.pe.settle_fraction);
  cfg.pe.min_measure = r.number("pe.min_measure", cfg.pe.min_measure);

  cfg.output_dir = r.text("output.dir", cfg.output_dir);

  r.reject_unused();
  cfg.validate();
  return cfg;
}

void ExperimentConfig::validate() const {
  try {
    material.validate();
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& err) {
    throw ConfigError("material", std::string("material block: ") + err.what());
  }
  if (quad_points < 64) throw ConfigError("model.quad_points", "model.quad_points must be >= 64");

  if (kernel.profile == KernelProfile::Explicit && !(kernel.sigma > 0.0)) {
    throw ConfigError("kernel.sigma", "kernel.sigma must be positive");
  }
  if (kernel.n < 1) throw ConfigError("kernel.n", "kernel.n must be >= 1");
  if (kernel.omega && !(kernel.omega->hi > kernel.omega->lo)) {
    throw ConfigError("kernel.omega", "kernel.omega needs lo < hi");
  }
  if (!(kernel.regularization >= 0.0)) {
    throw ConfigError("kernel.regularization", "kernel.regularization must be >= 0");
  }

  if (estimator.gamma && !(*estimator.gamma > 0.0)) {
    throw ConfigError("estimator.gamma", "estimator.gamma must be positive");
  }
  if (!estimator.gamma && !(estimator.gamma0 > 0.0)) {
    throw ConfigError("estimator.gamma0", "estimator.gamma0 must be positive");
  }
  const Eigen::Matrix2d& q = estimator.q_matrix;
  if (std::abs(q(0, 1) - q(1, 0)) > 1e-12 * q.cwiseAbs().maxCoeff() ||
      !(q(0, 0) > 0.0) || !(q.determinant() > 0.0)) {
    throw ConfigError("estimator.q", "estimator.q must be symmetric positive definite");
  }
  if (!(estimator.dt > 0.0)) throw ConfigError("estimator.dt", "estimator.dt must be positive");
  if (!(estimator.t_final > 0.0)) {
    throw ConfigError("estimator.t_final", "estimator.t_final must be positive");
  }
  if (estimator.record_stride < 1) {
    throw ConfigError("estimator.record_stride", "estimator.record_stride must be >= 1");
  }
  if (!estimator.x0.allFinite() || !estimator.xhat0.allFinite()) {
    throw ConfigError("estimator.x0", "initial states must be finite");
  }

  if (simulate.t_final && !(*simulate.t_final > 0.0)) {
    throw ConfigError("simulate.t_final", "simulate.t_final must be positive");
  }
  if (!(simulate.dt > 0.0)) throw ConfigError("simulate.dt", "simulate.dt must be positive");
  if (simulate.record_stride < 1) {
    throw ConfigError("simulate.record_stride", "simulate.record_stride must be >= 1");
  }

  if (pe.epsilon && !(*pe.epsilon > 0.0)) {
    throw ConfigError("pe.epsilon", "pe.epsilon must be positive");
  }
  if (pe.delta && !(*pe.delta > 0.0)) throw ConfigError("pe.delta", "pe.delta must be positive");
  if (pe.t_start && !(*pe.t_start >= 0.0)) {
    throw ConfigError("pe.t_start", "pe.t_start must be >= 0");
  }
  if (!(pe.settle_fraction > 0.0 && pe.settle_fraction < 1.0)) {
    throw ConfigError("pe.settle_fraction", "pe.settle_fraction must lie in (0, 1)");
  }
  if (!(pe.min_measure >= 0.0)) {
    throw ConfigError("pe.min_measure", "pe.min_measure must be >= 0");
  }
  if (output_dir.empty()) throw ConfigError("output.dir", "output.dir must not be empty");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

}  // namespace piezo
