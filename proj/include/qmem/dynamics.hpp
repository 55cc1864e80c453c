// Copyright 2026 The qmem Authors
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

// Single-excitation dynamics of the two-block transfer: coupled amplitude
// equations, the bright-mode constraint, closed-form branch solutions and a
// fixed-step RK4 cross-check.
//
// Rates are angular and may be given in any consistent unit; times use the
// inverse unit. Internally everything is scaled by kappa_ex of block 1.

#include <complex>
#include <span>
#include <vector>

#include "qmem/profile.hpp"
#include "qmem/slh.hpp"

namespace qmem {

/// Phase convention of the dark-mode amplitude in the single-excitation ansatz.
///
/// `Printed` writes the dark component as +i*beta|dark>; the bright-mode
/// constraint then reads 0 = g1 a1/r + sqrt(eps) g2 a2/r + (k sqrt(eps)/2) beta.
/// `Flipped` writes it as -i*beta|dark>, which flips every beta term; the
/// constraint reads ... - (k sqrt(eps)/2) beta. Both describe the same physics.
enum class BetaConvention { Printed, Flipped };

std::string to_string(BetaConvention c);
BetaConvention parse_convention(const std::string& s);

struct SystemParams {
  BlockParams block1;
  BlockParams block2;
  BetaConvention convention = BetaConvention::Flipped;

  /// kappa_ex,2 / kappa_ex,1.
  double epsilon() const { return block2.kappa_ex / block1.kappa_ex; }
  /// +1 for Printed, -1 for Flipped.
  double beta_sign() const { return convention == BetaConvention::Printed ? 1.0 : -1.0; }
  bool symmetric_intrinsic(double rel_tol = 1e-12) const;
  void validate() const;

  static SystemParams symmetric(double kappa_ex1, double kappa_ex2, double kappa_i, double gamma_i,
                                BetaConvention convention = BetaConvention::Flipped);
};

/// Amplitudes (alpha1, alpha2, beta) of |eg00>, |ge00>, |gg dark>.
struct Coefficients {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;

  double norm() const { return alpha1 * alpha1 + alpha2 * alpha2 + beta * beta; }
};

/// Coefficients and couplings at the t = 0 junction.
struct MidpointState {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;

  Coefficients coefficients() const { return {alpha1, alpha2, beta}; }
};

/// Constants of the closed-form branch solutions, in the caller's rate units.
/// B1p..B4p are expressed in the Printed frame (beta multiplied by beta_sign).
struct StructureConstants {
  std::complex<double> C;
  std::complex<double> Dprime;
  double B1p = 0.0;
  double B2p = 0.0;
  double B3p = 0.0;
  double B4p = 0.0;
  double G = 0.0;       ///< asymptotic alpha2^2 coefficient (t >= 0 branch)
  double Gprime = 0.0;  ///< asymptotic alpha1^2 coefficient (t <= 0 branch)
  bool forward_degenerate = false;
  bool backward_degenerate = false;
};

/// Relative size below which |C| or |D'| counts as degenerate.
inline constexpr double kDegeneracyTol = 1e-9;

/// Requires symmetric intrinsic losses and nonzero g1, g2.
StructureConstants structure_constants(const MidpointState& mid, const SystemParams& params);

/// Closed-form coefficients at time t. alpha2 (t >= 0) and alpha1 (t <= 0)
/// come from their squares with the sign tracked continuously from t = 0.
Coefficients coeffs_analytic(double t, const MidpointState& mid, const SystemParams& params);

/// Same as coeffs_analytic over a whole grid (any order), tracking signs once.
std::vector<Coefficients> analytic_trajectory(std::span<const double> grid, const MidpointState& mid,
                                              const SystemParams& params);

/// Right-hand side of the amplitude equations for couplings (g1, g2).
Coefficients ode_rhs(const Coefficients& state, double g1, double g2, const SystemParams& params);

/// Bright-mode amplitude growth rate under the active convention; zero keeps
/// the bright mode empty. Same units as the rates.
double bright_residual(const Coefficients& state, double g1, double g2, const SystemParams& params);

struct CoefficientTrajectory {
  std::vector<double> time;
  std::vector<double> alpha1;
  std::vector<double> alpha2;
  std::vector<double> beta;
  std::vector<double> norm;
  std::vector<double> residual;

  std::size_t size() const noexcept { return time.size(); }
  Coefficients at(std::size_t k) const { return {alpha1[k], alpha2[k], beta[k]}; }
  void push_back(double t, const Coefficients& c, double res);
};

/// Largest acceptable RK4 local error estimate (step doubling).
inline constexpr double kMaxLocalError = 1e-8;

/// Fixed-step RK4 over `grid` (ascending, first node = initial time). Controls
/// are read through ControlProfile::at at nodes and step midpoints. Throws
/// StepSizeError when the step-doubling error estimate exceeds kMaxLocalError.
CoefficientTrajectory integrate_effective(const ControlProfile& controls, const Coefficients& init,
                                          const SystemParams& params, std::span<const double> grid);

/// Bundle analytic coefficients into a trajectory with diagnostics.
CoefficientTrajectory analytic_coefficient_trajectory(std::span<const double> grid, const MidpointState& mid,
                                                      const ControlProfile& controls,
                                                      const SystemParams& params);

struct WindowOptions {
  double tol = 1e-6;
  /// Cap on |t| in units of 1/min(kappa_ex,1, kappa_ex,2).
  double cap = 25.0;
};

struct TimeWindow {
  double t_initial = 0.0;
  double t_final = 0.0;
  bool initial_capped = false;
  bool final_capped = false;
};

/// Earliest times beyond which the forward leftovers |a1|^2+|beta|^2 and the
/// backward mismatch to the pure-memory boundary stay below tol.
TimeWindow transfer_window(const MidpointState& mid, const SystemParams& params, const WindowOptions& opts = {});

/// Uniform grid k*dt covering the window, always containing t = 0.
std::vector<double> uniform_grid(const TimeWindow& window, double dt);

/// Samples of `grid` at an even number of steps from t = 0. Integrating on
/// the result with a profile sampled on `grid` puts every RK4 midpoint on a
/// profile sample.
std::vector<double> half_rate_grid(std::span<const double> grid);

/// Default control sampling step: 1e-3 / max(kappa_ex,1, kappa_ex,2).
double default_profile_step(const SystemParams& params);

}  // namespace qmem
