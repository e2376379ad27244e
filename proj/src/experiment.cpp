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

#include "piezo_rkhs/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <numbers>
#include <ostream>

#include "piezo_rkhs/csv.hpp"
#include "piezo_rkhs/errors.hpp"

namespace piezo {

namespace {

std::string prepare_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw ConfigError("output.dir", "cannot create output directory '" + dir + "'");
  }
  return dir;
}

std::string join(const std::string& dir, const char* name) {
  return (std::filesystem::path(dir) / name).string();
}

double sup_on(const Nonlinearity& f, Interval omega, int points = 512) {
  double out = 0.0;
  for (int i = 0; i < points; ++i) {
    out = std::max(out, std::abs(f(omega.lo + omega.width() * i / (points - 1.0))));
  }
  return out;
}

}  // namespace

double forcing_period(const PlantModel& plant) {
  return 2.0 * std::numbers::pi / plant.input_omega;
}

RunSettings simulation_settings(const ExperimentConfig& cfg, const PlantModel& plant) {
  RunSettings run;
  run.t_final = cfg.simulate.t_final.value_or(100.0 * forcing_period(plant));
  run.dt = cfg.simulate.dt;
  run.record_stride = cfg.simulate.record_stride;
  return run;
}

Interval resolve_omega(const ExperimentConfig& cfg, const PlantModel& plant) {
  if (cfg.kernel.omega) return *cfg.kernel.omega;
  RunSettings run = simulation_settings(cfg, plant);
  run.record_stride = 1;
  const PlantTrajectory traj = simulate_plant(plant, run, cfg.estimator.x0);
  std::vector<double> x1(traj.x.size());
  std::transform(traj.x.begin(), traj.x.end(), x1.begin(), [](const auto& x) { return x(0); });
  const Interval omega = extract_omega(x1, cfg.pe.settle_fraction);
  if (!(omega.hi > omega.lo)) {
    throw DomainError("the settled plant response is constant; set kernel.omega explicitly");
  }
  return omega;
}

double resolve_sigma(const KernelSettings& kernel, Interval omega) {
  switch (kernel.profile) {
    case KernelProfile::Explicit: return kernel.sigma;
    case KernelProfile::PaperLiteral: return kPaperLiteralSigma;
    case KernelProfile::Overlapping:
      return kernel.n > 1 ? omega.width() / static_cast<double>(kernel.n - 1) : omega.width();
  }
  return kernel.sigma;
}

KernelBasis build_basis(const KernelSettings& kernel, Interval omega) {
  return make_basis(omega, kernel.n, resolve_sigma(kernel, omega), kernel.regularization);
}

EstimationSetup prepare_estimation(const ExperimentConfig& cfg) {
  DerivedModel model = derive_model(cfg.material, cfg.quad_points);
  const Interval omega = resolve_omega(cfg, model.plant);
  KernelBasis basis = build_basis(cfg.kernel, omega);

  Nonlinearity truth = plant_nonlinearity(model.plant);
  Eigen::VectorXd alpha_true;
  if (cfg.estimator.truth == TruthKind::Manufactured) {
    Eigen::VectorXd at_centers(static_cast<Eigen::Index>(basis.size()));
    for (std::size_t j = 0; j < basis.size(); ++j) {
      at_centers(static_cast<Eigen::Index>(j)) = truth(basis.centers()[j]);
    }
    alpha_true = basis.gram_solve(at_centers);
    truth = kernel_expansion(basis, alpha_true);
  }

  EstimatorConfig ecfg;
  ecfg.gamma = cfg.estimator.gamma.value_or(cfg.estimator.gamma0 *
                                            std::max(1.0, sup_on(truth, omega)));
  ecfg.q_matrix = cfg.estimator.q_matrix;
  ecfg.initial_x = cfg.estimator.x0;
  ecfg.initial_xhat = cfg.estimator.xhat0;
  ecfg.initial_alpha =
      Eigen::VectorXd::Constant(static_cast<Eigen::Index>(basis.size()), cfg.estimator.alpha0);

  RunSettings run;
  run.t_final = cfg.estimator.t_final;
  run.dt = cfg.estimator.dt;
  run.record_stride = cfg.estimator.record_stride;

  return EstimationSetup{std::move(model), omega,        std::move(basis), std::move(truth),
                         std::move(alpha_true), ecfg, run};
}

PeAuditConfig resolve_pe(const PeSettings& pe, const PlantModel& plant, const KernelBasis& basis,
                         std::span<const double> t) {
  if (t.empty()) throw DomainError("resolve_pe: empty trajectory");
  PeAuditConfig out;
  out.epsilon = pe.epsilon.value_or(0.4 * basis.min_spacing());
  out.delta = pe.delta.value_or(forcing_period(plant));
  if (pe.t_start) {
    out.t_start = *pe.t_start;
  } else {
    const auto skip = static_cast<std::size_t>(std::floor(pe.settle_fraction * t.size()));
    out.t_start = t[std::min(skip, t.size() - 1)];
  }
  out.min_measure = pe.min_measure;
  try {
    out.validate(basis.centers());
  } catch (const ConfigError&) {
    throw;
  } catch (const ValidationError& err) {
    throw ConfigError("pe.epsilon", err.what());
  }
  return out;
}

void cmd_derive(const ExperimentConfig& cfg, std::ostream& out) {
  const DerivedModel d = derive_model(cfg.material, cfg.quad_points);
  const auto row = [&](const char* name, double v) { out << name << ',' << format_double(v) << '\n'; };
  out << "name,value\n";
  const EnthalpyConstants& e = d.enthalpy;
  row("a02", e.a02);
  row("a24", e.a24);
  row("b02", e.b02);
  row("b11", e.b11);
  row("b31", e.b31);
  row("nu0", e.nu0);
  row("gamma0", e.gamma0);
  row("gamma1", e.gamma1);
  row("gamma2", e.gamma2);
  const ModalCoefficients& m = d.modal;
  row("M", m.M);
  row("P", m.P_coef);
  row("K_b", m.K_b);
  row("K_p", m.K_p);
  row("K_N", m.K_N);
  row("B", m.B_coef);
  row("Q_N", m.Q_N);
  row("B_N", m.B_N_coef);
  row("C", m.C_cap);
  const PlantModel& p = d.plant;
  row("K_hat", p.K_hat);
  row("K_hat_N1", p.kn1_over_M * p.M);
  row("K_hat_N2", p.kn2_over_M * p.M);
  row("C_damp", p.C_damp);
  row("omega_n", p.omega_n);
  row("damping_ratio", p.C_damp / (2.0 * p.M * p.omega_n));
  row("A_21", p.A(1, 0));
  row("A_22", p.A(1, 1));
  row("B_2", p.B_vec(1));
  row("K_hat_N1_over_M", p.kn1_over_M);
  row("K_hat_N2_over_M", p.kn2_over_M);
}

Interval cmd_simulate(const ExperimentConfig& cfg, const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const DerivedModel d = derive_model(cfg.material, cfg.quad_points);
  const RunSettings run = simulation_settings(cfg, d.plant);
  const PlantTrajectory traj = simulate_plant(d.plant, run, cfg.estimator.x0);
  const std::string path = join(dir, "plant.csv");
  write_plant_csv(path, traj);

  std::vector<double> x1(traj.x.size());
  std::transform(traj.x.begin(), traj.x.end(), x1.begin(), [](const auto& x) { return x(0); });
  const Interval range = extract_omega(x1, cfg.pe.settle_fraction);
  log << "simulate: t_final=" << format_double(run.t_final) << " samples=" << traj.t.size()
      << " settled x1 range=[" << format_double(range.lo) << ", " << format_double(range.hi)
      << "] -> " << path << '\n';
  return range;
}

ErrorReport cmd_estimate(const ExperimentConfig& cfg, const std::string& out_dir,
                         std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const EstimationSetup s = prepare_estimation(cfg);
  const Trajectory traj = run_coupled(s.model.plant, s.basis, s.estimator, s.run, s.truth);
  const ErrorReport report = error_diagnostics(traj, s.truth, s.basis);

  const std::string traj_path = join(dir, "trajectory.csv");
  const std::string fn_path = join(dir, "function_estimate.csv");
  write_trajectory_csv(traj_path, traj);
  write_function_csv(fn_path, s.basis, traj.alpha.back(), s.truth, report.omega);

  const double peak = *std::max_element(traj.err_norm.begin(), traj.err_norm.end());
  log << "estimate: profile=" << profile_name(cfg.kernel.profile)
      << " sigma=" << format_double(s.basis.sigma()) << " gamma=" << format_double(s.estimator.gamma)
      << " omega=[" << format_double(s.omega.lo) << ", " << format_double(s.omega.hi) << "]"
      << " final_err_norm=" << format_double(traj.err_norm.back())
      << " peak_err_norm=" << format_double(peak)
      << " sup_error=" << format_double(report.sup_error)
      << " sup_error_rel=" << format_double(report.sup_truth > 0.0 ? report.sup_error / report.sup_truth : 0.0)
      << " sup_error_outside=" << format_double(report.sup_error_outside)
      << " coefficient_drift=" << format_double(report.coefficient_drift) << '\n';
  log << "estimate: wrote " << traj_path << " and " << fn_path << '\n';
  return report;
}

PeAuditReport cmd_pe_check(const ExperimentConfig& cfg, const std::string& trajectory_path,
                           const std::string& out_dir, std::ostream& log) {
  const std::string dir = prepare_dir(out_dir);
  const CsvTable table = read_csv(trajectory_path);
  const std::vector<double> t = table.column("t");
  const std::vector<double> x1 = table.column("x1");
  if (t.size() < 2) throw ParseError(1, "trajectory has fewer than two rows");

  const DerivedModel d = derive_model(cfg.material, cfg.quad_points);
  const Interval omega =
      cfg.kernel.omega ? *cfg.kernel.omega : extract_omega(x1, cfg.pe.settle_fraction);
  if (!(omega.hi > omega.lo)) {
    // No interval to place centers on; a resting trajectory excites nothing.
    PeAuditReport report;
    report.window_count = 0;
    report.min_measure = 0.0;
    report.passed = false;
    write_pe_csv(join(dir, "pe_audit.csv"), report);
    log << "pe-check: FAIL trajectory is constant after settling (x1 = " << format_double(omega.lo)
        << ")\n";
    return report;
  }
  const KernelBasis basis = build_basis(cfg.kernel, omega);
  const PeAuditConfig pe = resolve_pe(cfg.pe, d.plant, basis, t);
  const PeAuditReport report = audit_pe(t, x1, basis.centers(), pe);
  const std::string path = join(dir, "pe_audit.csv");
  write_pe_csv(path, report);
  log << "pe-check: " << (report.passed ? "PASS" : "FAIL") << " windows=" << report.window_count
      << " centers=" << basis.size() << " epsilon=" << format_double(pe.epsilon)
      << " delta=" << format_double(pe.delta) << " min_measure=" << format_double(report.min_measure)
      << " worst_center=" << report.worst_center
      << " worst_window_start=" << format_double(report.worst_window_start) << " -> " << path
      << '\n';
  return report;
}

}  // namespace piezo
