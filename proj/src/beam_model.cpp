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

#include "piezo_rkhs/beam_model.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "piezo_rkhs/errors.hpp"

namespace piezo {

namespace {

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ValidationError(std::string(name) + " must be strictly positive and finite");
  }
}

// Nodes and weights of the 16-point Gauss-Legendre rule on [-1, 1],
// computed once by Newton iteration on P_16.
constexpr int kPanelOrder = 16;

struct GaussRule {
  std::array<double, kPanelOrder> nodes{};
  std::array<double, kPanelOrder> weights{};
};

GaussRule make_gauss_rule() {
  GaussRule rule;
  constexpr int n = kPanelOrder;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

const GaussRule& gauss_rule() {
  static const GaussRule rule = make_gauss_rule();
  return rule;
}

// Composite rule on [lo, hi] with ceil(points / 16) equal panels.
template <class F>
double integrate_panels(F&& f, double lo, double hi, int points) {
  if (!(hi > lo)) return 0.0;
  const GaussRule& rule = gauss_rule();
  const int panels = std::max(1, (points + kPanelOrder - 1) / kPanelOrder);
  const double h = (hi - lo) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = lo + (p + 0.5) * h;
    double panel = 0.0;
    for (int k = 0; k < kPanelOrder; ++k) {
      panel += rule.weights[k] * f(mid + 0.5 * h * rule.nodes[k]);
    }
    total += 0.5 * h * panel;
  }
  return total;
}

bool relative_change_ok(double coarse, double fine) {
  const double scale = std::max(std::abs(coarse), std::abs(fine));
  if (scale == 0.0) return true;
  return std::abs(fine - coarse) <= 1e-10 * scale;
}

}  // namespace

void MaterialGeometryConfig::validate() const {
  require_positive(rho_s, "rho_s");
  require_positive(h_s, "h_s");
  require_positive(C_b, "C_b");
  require_positive(l, "l");
  require_positive(width, "width");
  require_positive(rho_p, "rho_p");
  require_positive(input_omega, "input_omega");
  require_positive(mode_tip_value, "mode_tip_value");
  // h_p == 0 and patch_start == patch_end describe a bare beam; the
  // coupling terms then vanish identically.
  if (!(h_p >= 0.0) || !std::isfinite(h_p)) {
    throw ValidationError("h_p must be non-negative and finite");
  }
  if (!(patch_start >= 0.0 && patch_start <= patch_end && patch_end <= l)) {
    throw ValidationError("patch must satisfy 0 <= patch_start <= patch_end <= l");
  }
  for (double v : {d31_0, d31_1, d31_2, Ep_0, Ep_1, Ep_2, eps33, damp_alpha, damp_beta,
                   input_amplitude}) {
    if (!std::isfinite(v)) throw ValidationError("material parameters must be finite");
  }
}

MaterialGeometryConfig table1_config() {
  MaterialGeometryConfig cfg;
  cfg.rho_s = 7800.0;
  cfg.h_s = 0.003;
  cfg.C_b = 2.089e11;
  cfg.l = 0.4;
  cfg.width = 0.025;
  cfg.rho_p = 7790.0;
  cfg.h_p = 0.001;
  cfg.patch_start = 0.0;
  cfg.patch_end = 0.4;
  cfg.d31_0 = -2.1e-10;
  cfg.d31_1 = -36.9746;
  cfg.d31_2 = -0.03596;
  cfg.Ep_0 = 0.667e11;
  cfg.Ep_1 = -3.328e-12;
  cfg.Ep_2 = -1.4e18;
  cfg.eps33 = 2.12e-8;
  cfg.damp_alpha = 0.1;
  cfg.damp_beta = 1e-3;
  cfg.input_amplitude = 1.0;
  cfg.input_omega = 22.5;
  return cfg;
}

double PlantModel::input(double t) const {
  return input_amplitude * std::sin(input_omega * t);
}

ModeSample mode_shape(double xi, double length, double tip_value) {
  if (!(xi >= 0.0 && xi <= 1.0)) {
    throw DomainError("mode_shape: xi must lie in [0, 1], got " + std::to_string(xi));
  }
  if (!(length > 0.0)) throw DomainError("mode_shape: length must be positive");

  constexpr double lam = kFirstModeLambda;
  const double sigma =
      (std::cosh(lam) + std::cos(lam)) / (std::sinh(lam) + std::sin(lam));
  const double z = lam * xi;
  const double ch = std::cosh(z), sh = std::sinh(z), c = std::cos(z), s = std::sin(z);
  const double scale = 0.5 * tip_value;
  const double k = lam / length;

  ModeSample out;
  out.psi = scale * (ch - c - sigma * (sh - s));
  out.dpsi = scale * k * (sh + s - sigma * (ch - c));
  out.psi_dd = scale * k * k * (ch + c - sigma * (sh + s));
  return out;
}

EnthalpyConstants enthalpy_constants(const MaterialGeometryConfig& cfg) {
  EnthalpyConstants ec;
  ec.nu0 = cfg.eps33 - cfg.d31_0 * cfg.d31_0 * cfg.Ep_0;
  ec.gamma0 = cfg.Ep_0 * cfg.d31_0;
  ec.gamma1 = cfg.Ep_0 * cfg.d31_1 + cfg.Ep_1 * cfg.d31_0;
  ec.gamma2 = cfg.Ep_0 * cfg.d31_2 + cfg.Ep_2 * cfg.d31_0 + cfg.Ep_1 * cfg.d31_1;

  const double inner = 0.5 * cfg.h_s;
  const double outer = inner + cfg.h_p;
  const auto band = [&](int power) { return std::pow(outer, power) - std::pow(inner, power); };

  ec.a02 = cfg.Ep_0 * cfg.width * band(3) / 6.0;
  ec.a24 = cfg.Ep_2 * cfg.width * band(5) / 20.0;
  ec.b02 = 0.5 * ec.nu0 * cfg.width * cfg.h_p * (cfg.patch_end - cfg.patch_start);
  ec.b11 = 0.5 * ec.gamma0 * cfg.width * band(2);
  ec.b31 = ec.gamma2 * cfg.width * band(4) / 12.0;
  return ec;
}

double cubic_elastic_section_moment(const MaterialGeometryConfig& cfg) {
  // (1/3) C1 * width * (integral of z^3 over the lower and upper layers)
  const double inner = 0.5 * cfg.h_s;
  const double outer = inner + cfg.h_p;
  const auto z4 = [](double z) { return 0.25 * z * z * z * z; };
  const double upper = z4(outer) - z4(inner);
  const double lower = z4(-inner) - z4(-outer);
  return cfg.Ep_1 * cfg.width * (upper + lower) / 3.0;
}

double substrate_inertia(const MaterialGeometryConfig& cfg) {
  return cfg.width * cfg.h_s * cfg.h_s * cfg.h_s / 12.0;
}

double mass_per_length(const MaterialGeometryConfig& cfg) {
  const double areal = cfg.rho_s * cfg.h_s + 2.0 * cfg.rho_p * cfg.h_p;
  return cfg.mass_includes_width ? areal * cfg.width : areal;
}

ModalCoefficients modal_coefficients_unchecked(const MaterialGeometryConfig& cfg,
                                               const EnthalpyConstants& ec,
                                               int quad_points) {
  if (quad_points < 1) throw DomainError("quad_points must be positive");
  const double l = cfg.l;
  const double a = cfg.patch_start;
  const double b = cfg.patch_end;
  const double tip = cfg.mode_tip_value;
  const auto shape = [&](double x) { return mode_shape(std::clamp(x / l, 0.0, 1.0), l, tip); };

  // Whole-beam integrals are split at a and b so that every panel sees a
  // smooth integrand, matching the patch-only integrals exactly.
  const auto over_beam = [&](auto&& f) {
    return integrate_panels(f, 0.0, a, quad_points) + integrate_panels(f, a, b, quad_points) +
           integrate_panels(f, b, l, quad_points);
  };
  const auto over_patch = [&](auto&& f) { return integrate_panels(f, a, b, quad_points); };

  const double psi2 = over_beam([&](double x) { return std::pow(shape(x).psi, 2); });
  const double psi1 = over_beam([&](double x) { return shape(x).psi; });
  const double curv2_beam = over_beam([&](double x) { return std::pow(shape(x).psi_dd, 2); });
  const double curv1 = over_patch([&](double x) { return shape(x).psi_dd; });
  const double curv2 = over_patch([&](double x) { return std::pow(shape(x).psi_dd, 2); });
  const double curv3 = over_patch([&](double x) { return std::pow(shape(x).psi_dd, 3); });
  const double curv4 = over_patch([&](double x) { return std::pow(shape(x).psi_dd, 4); });

  const double m = mass_per_length(cfg);
  ModalCoefficients mc;
  mc.M = m * psi2;
  mc.P_coef = m * psi1;
  mc.K_b = cfg.C_b * substrate_inertia(cfg) * curv2_beam;
  mc.K_p = 4.0 * ec.a02 * curv2;
  mc.K_N = 8.0 * ec.a24 * curv4;
  mc.B_coef = 2.0 * ec.b11 * curv1;
  mc.Q_N = 6.0 * ec.b31 * curv3;
  mc.B_N_coef = 2.0 * ec.b31 * curv3;
  mc.C_cap = 4.0 * ec.b02;
  return mc;
}

ModalCoefficients modal_coefficients(const MaterialGeometryConfig& cfg,
                                     const EnthalpyConstants& ec, int quad_points) {
  if (quad_points < 64) {
    throw DomainError("modal_coefficients: quad_points must be at least 64");
  }
  const ModalCoefficients coarse = modal_coefficients_unchecked(cfg, ec, quad_points);
  const ModalCoefficients fine = modal_coefficients_unchecked(cfg, ec, 2 * quad_points);

  const std::array<std::pair<const char*, std::pair<double, double>>, 8> pairs{{
      {"M", {coarse.M, fine.M}},
      {"P", {coarse.P_coef, fine.P_coef}},
      {"K_b", {coarse.K_b, fine.K_b}},
      {"K_p", {coarse.K_p, fine.K_p}},
      {"K_N", {coarse.K_N, fine.K_N}},
      {"B", {coarse.B_coef, fine.B_coef}},
      {"Q_N", {coarse.Q_N, fine.Q_N}},
      {"B_N", {coarse.B_N_coef, fine.B_N_coef}},
  }};
  for (const auto& [name, values] : pairs) {
    if (!relative_change_ok(values.first, values.second)) {
      throw QuadratureError(std::string("modal_coefficients: ") + name +
                            " changed by more than 1e-10 relative when doubling quad_points");
    }
  }
  return fine;
}

PlantModel assemble_plant(const ModalCoefficients& mc, const MaterialGeometryConfig& cfg) {
  if (!(mc.M > 0.0)) throw InvalidModelError("assemble_plant: modal mass must be positive");

  const double K = mc.K_b + mc.K_p;
  double coupling_lin = 0.0;
  double coupling_cubic = 0.0;
  double coupling_quintic = 0.0;
  if (mc.C_cap != 0.0) {
    coupling_lin = mc.B_coef * mc.B_coef / mc.C_cap;
    coupling_cubic = (mc.B_coef * mc.B_N_coef + mc.Q_N * mc.B_coef) / mc.C_cap;
    coupling_quintic = mc.Q_N * mc.B_N_coef / mc.C_cap;
  } else if (mc.B_coef != 0.0 || mc.B_N_coef != 0.0 || mc.Q_N != 0.0) {
    throw DomainError("assemble_plant: zero capacitance with non-zero electromechanical coupling");
  }

  PlantModel plant;
  plant.M = mc.M;
  plant.K_hat = K + coupling_lin;
  if (!(plant.K_hat > 0.0)) {
    throw InvalidModelError("assemble_plant: condensed stiffness K_hat must be positive, got " +
                            std::to_string(plant.K_hat));
  }
  const double kn1 = mc.K_N + coupling_cubic;
  const double kn2 = coupling_quintic;
  plant.kn1_over_M = kn1 / mc.M;
  plant.kn2_over_M = kn2 / mc.M;
  plant.C_damp = cfg.damp_alpha * mc.M + cfg.damp_beta * plant.K_hat;
  plant.A << 0.0, 1.0, -plant.K_hat / mc.M, -plant.C_damp / mc.M;
  plant.B_vec = Eigen::Vector2d(0.0, -mc.P_coef / mc.M);
  plant.B_N_vec = Eigen::Vector2d(0.0, 1.0);
  plant.omega_n = std::sqrt(plant.K_hat / mc.M);
  plant.input_amplitude = cfg.input_amplitude;
  plant.input_omega = cfg.input_omega;
  return plant;
}

double true_nonlinearity(const PlantModel& plant, double x1) {
  const double x3 = x1 * x1 * x1;
  return -plant.kn1_over_M * x3 - plant.kn2_over_M * x3 * x1 * x1;
}

double electric_field(const ModalCoefficients& mc, double u) {
  if (mc.C_cap == 0.0) throw DomainError("electric_field: capacitance constant is zero");
  return (mc.B_coef * u + mc.B_N_coef * u * u * u) / mc.C_cap;
}

DerivedModel derive_model(const MaterialGeometryConfig& cfg, int quad_points) {
  cfg.validate();
  DerivedModel out;
  out.enthalpy = enthalpy_constants(cfg);
  out.modal = modal_coefficients(cfg, out.enthalpy, quad_points);
  out.plant = assemble_plant(out.modal, cfg);
  return out;
}

}  // namespace piezo
