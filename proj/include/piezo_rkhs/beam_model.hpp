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

namespace piezo {

/// Physical parameters of a cantilevered piezoelectric bimorph under base
/// excitation. SI units throughout.
struct MaterialGeometryConfig {
  // substrate
  double rho_s = 0.0;  ///< density, kg/m^3
  double h_s = 0.0;    ///< thickness, m
  double C_b = 0.0;    ///< Young's modulus, Pa
  double l = 0.0;      ///< beam length, m
  double width = 0.0;  ///< beam width, m

  // piezoceramic layers (two, bonded symmetrically)
  double rho_p = 0.0;
  double h_p = 0.0;
  double patch_start = 0.0;  ///< a, m
  double patch_end = 0.0;    ///< b, m

  double d31_0 = 0.0, d31_1 = 0.0, d31_2 = 0.0;  ///< strain coefficients
  double Ep_0 = 0.0, Ep_1 = 0.0, Ep_2 = 0.0;     ///< modulus expansion
  double eps33 = 0.0;                            ///< permittivity, F/m

  double damp_alpha = 0.0;  ///< mass-proportional Rayleigh coefficient, 1/s
  double damp_beta = 0.0;   ///< stiffness-proportional Rayleigh coefficient, s

  double input_amplitude = 0.0;  ///< base acceleration amplitude, m/s^2
  double input_omega = 0.0;      ///< drive frequency, rad/s

  /// Value of the mode shape at the free end. 2 is the convention for the
  /// unit-L2 clamped-free eigenfunction.
  double mode_tip_value = 2.0;
  /// When true the mass per length is (rho_s h_s + 2 rho_p h_p) * width.
  /// When false the areal density is used as-is (kg/m^2 entering as kg/m).
  bool mass_includes_width = true;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;
};

/// The baseline bimorph (PIC 151 on St 37).
MaterialGeometryConfig table1_config();

struct EnthalpyConstants {
  double a02 = 0.0;
  double a24 = 0.0;
  double b02 = 0.0;
  double b11 = 0.0;
  double b31 = 0.0;
  double nu0 = 0.0;
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
};

struct ModalCoefficients {
  double M = 0.0;         ///< modal mass
  double P_coef = 0.0;    ///< base-excitation coupling
  double K_b = 0.0;       ///< substrate bending stiffness
  double K_p = 0.0;       ///< piezo layer stiffness
  double K_N = 0.0;       ///< cubic stiffness
  double B_coef = 0.0;    ///< linear electromechanical coupling
  double Q_N = 0.0;       ///< u^2 E coupling
  double B_N_coef = 0.0;  ///< u^3 coupling in the charge equation
  double C_cap = 0.0;     ///< capacitance-like constant
};

struct PlantModel {
  Eigen::Matrix2d A = Eigen::Matrix2d::Zero();
  Eigen::Vector2d B_vec = Eigen::Vector2d::Zero();
  Eigen::Vector2d B_N_vec{0.0, 1.0};
  double kn1_over_M = 0.0;
  double kn2_over_M = 0.0;
  double M = 0.0;
  double K_hat = 0.0;
  double C_damp = 0.0;
  double omega_n = 0.0;
  double input_amplitude = 0.0;
  double input_omega = 0.0;

  /// Base acceleration A sin(omega t).
  double input(double t) const;
};

/// Sample of the first clamped-free mode. Derivatives are taken with
/// respect to the physical coordinate x = xi * l.
struct ModeSample {
  double psi = 0.0;
  double dpsi = 0.0;
  double psi_dd = 0.0;
};

inline constexpr double kFirstModeLambda = 1.87510407;

/// First cantilever mode at normalized position xi in [0, 1].
ModeSample mode_shape(double xi, double length, double tip_value = 2.0);

EnthalpyConstants enthalpy_constants(const MaterialGeometryConfig& cfg);

/// Cross-section moment of the C^{E(1)} term over both piezo layers. It is
/// zero for a symmetric bimorph, which is why no modal coefficient carries
/// Ep_1 directly.
double cubic_elastic_section_moment(const MaterialGeometryConfig& cfg);

/// Second moment of area of the substrate about the neutral axis.
double substrate_inertia(const MaterialGeometryConfig& cfg);

/// Mass per unit length entering the kinetic energy.
double mass_per_length(const MaterialGeometryConfig& cfg);

inline constexpr int kDefaultQuadPoints = 256;

/// Composite Gauss-Legendre over [0, l], split at the patch ends.
/// Also integrates at 2 * quad_points and throws QuadratureError when any
/// coefficient moves by more than 1e-10 relative.
ModalCoefficients modal_coefficients(const MaterialGeometryConfig& cfg,
                                     const EnthalpyConstants& ec,
                                     int quad_points = kDefaultQuadPoints);

/// Same integrals without the refinement check.
ModalCoefficients modal_coefficients_unchecked(const MaterialGeometryConfig& cfg,
                                               const EnthalpyConstants& ec,
                                               int quad_points);

PlantModel assemble_plant(const ModalCoefficients& mc, const MaterialGeometryConfig& cfg);

/// f(x1) = -(K_N1/M) x1^3 - (K_N2/M) x1^5.
double true_nonlinearity(const PlantModel& plant, double x1);

/// E_z = (B u + B_N u^3) / C.
double electric_field(const ModalCoefficients& mc, double u);

/// Everything `derive` reports, computed in one pass.
struct DerivedModel {
  EnthalpyConstants enthalpy;
  ModalCoefficients modal;
  PlantModel plant;
};

DerivedModel derive_model(const MaterialGeometryConfig& cfg,
                          int quad_points = kDefaultQuadPoints);

}  // namespace piezo
