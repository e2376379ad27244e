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

// Command-line front end.
//
//   piezo-rkhs derive   --config table1.cfg
//   piezo-rkhs simulate --config table1.cfg --out runs/plant
//   piezo-rkhs estimate --config a.cfg --config b.cfg --jobs 2 --out runs
//   piezo-rkhs pe-check --config table1.cfg --trajectory runs/trajectory.csv
//
// Exit codes: 0 success, 1 invalid input, 2 numerical failure, 3 the
// PE audit ran but did not pass.

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "piezo_rkhs/config.hpp"
#include "piezo_rkhs/errors.hpp"
#include "piezo_rkhs/experiment.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAuditFailed = 3;

struct Options {
  std::vector<std::string> configs;
  std::optional<std::string> out;
  std::optional<std::string> profile;
  std::optional<double> t_final;
  std::string trajectory;
  unsigned jobs = 1;
};

// Runs `body` and turns library exceptions into exit codes.
template <class Body>
int guarded(const std::string& label, std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const piezo::ConfigError& e) {
    err << label << "config error";
    if (!e.key().empty()) err << " [" << e.key() << "]";
    err << ": " << e.what() << '\n';
    return kExitValidation;
  } catch (const piezo::ParseError& e) {
    err << label << "parse error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const piezo::ValidationError& e) {
    err << label << "invalid input: " << e.what() << '\n';
    return kExitValidation;
  } catch (const piezo::DivergenceError& e) {
    err << label << "diverged at t = " << e.time() << ": " << e.what() << '\n';
    return kExitNumerical;
  } catch (const piezo::NumericalError& e) {
    err << label << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << label << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
}

piezo::ExperimentConfig load(const std::string& path, const Options& opt) {
  piezo::ExperimentConfig cfg = piezo::load_config(path);
  if (opt.profile) {
    cfg.kernel.profile = piezo::parse_profile(*opt.profile);
    if (cfg.kernel.profile == piezo::KernelProfile::Explicit && !(cfg.kernel.sigma > 0.0)) {
      throw piezo::ConfigError("kernel.sigma", "--profile explicit needs kernel.sigma in the config");
    }
  }
  if (opt.t_final) cfg.simulate.t_final = *opt.t_final;
  cfg.validate();
  return cfg;
}

// One output directory per config. With several configs each gets a
// subdirectory named after the config file.
std::string output_dir(const piezo::ExperimentConfig& cfg, const std::string& path,
                       const Options& opt) {
  const std::string base = opt.out.value_or(cfg.output_dir);
  if (opt.configs.size() < 2) return base;
  return (std::filesystem::path(base) / std::filesystem::path(path).stem()).string();
}

// Runs `task` once per config on up to opt.jobs threads. Output of each
// run is buffered and printed in config order.
template <class Task>
int for_each_config(const Options& opt, Task&& task) {
  const std::size_t count = opt.configs.size();
  std::vector<std::ostringstream> logs(count);
  std::vector<std::ostringstream> errs(count);
  std::vector<int> codes(count, kExitOk);
  std::atomic<std::size_t> next{0};

  const auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      const std::string& path = opt.configs[i];
      const std::string label = count > 1 ? path + ": " : "";
      codes[i] = guarded(label, errs[i], [&] {
        const piezo::ExperimentConfig cfg = load(path, opt);
        return task(cfg, output_dir(cfg, path, opt), logs[i]);
      });
    }
  };

  const unsigned threads =
      static_cast<unsigned>(std::min<std::size_t>(std::max(1u, opt.jobs), count));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int worst = kExitOk;
  for (std::size_t i = 0; i < count; ++i) {
    std::cout << logs[i].str();
    std::cerr << errs[i].str();
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive RKHS estimation of the nonlinearity in a piezoelectric bimorph"};
  app.require_subcommand(1);
  Options opt;

  const auto common = [&](CLI::App* sub, bool many) {
    auto* c = sub->add_option("--config", opt.configs, "experiment config file")->required();
    if (!many) c->expected(1);
    sub->add_option("--out", opt.out, "output directory (overrides output.dir)");
    sub->add_option("--profile", opt.profile, "kernel profile: overlapping, paper-literal or explicit")
        ->check(CLI::IsMember({"overlapping", "paper-literal", "explicit"}));
    if (many) {
      sub->add_option("--jobs", opt.jobs, "configs to run concurrently")
          ->check(CLI::PositiveNumber);
    }
  };

  auto* derive = app.add_subcommand("derive", "print derived model constants as CSV");
  common(derive, true);
  auto* simulate = app.add_subcommand("simulate", "plant-only trajectory CSV");
  common(simulate, true);
  simulate->add_option("--t-final", opt.t_final, "simulated time, s (overrides simulate.t_final)")
      ->check(CLI::PositiveNumber);
  auto* estimate = app.add_subcommand("estimate", "coupled estimator run");
  common(estimate, true);
  auto* pe_check = app.add_subcommand("pe-check", "persistence-of-excitation audit");
  common(pe_check, false);
  pe_check->add_option("--trajectory", opt.trajectory, "trajectory CSV with t and x1 columns")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitValidation;
  }

  if (derive->parsed()) {
    return for_each_config(opt, [&](const piezo::ExperimentConfig& cfg, const std::string&,
                                    std::ostream& log) {
      piezo::cmd_derive(cfg, log);
      return kExitOk;
    });
  }
  if (simulate->parsed()) {
    return for_each_config(opt, [&](const piezo::ExperimentConfig& cfg, const std::string& dir,
                                    std::ostream& log) {
      piezo::cmd_simulate(cfg, dir, log);
      return kExitOk;
    });
  }
  if (estimate->parsed()) {
    return for_each_config(opt, [&](const piezo::ExperimentConfig& cfg, const std::string& dir,
                                    std::ostream& log) {
      piezo::cmd_estimate(cfg, dir, log);
      return kExitOk;
    });
  }
  return for_each_config(opt, [&](const piezo::ExperimentConfig& cfg, const std::string& dir,
                                  std::ostream& log) {
    const auto report = piezo::cmd_pe_check(cfg, opt.trajectory, dir, log);
    return report.passed ? kExitOk : kExitAuditFailed;
  });
}
