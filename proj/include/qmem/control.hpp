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

// Coupling-profile synthesis, the midpoint family and its optimizer, and
// regime classification.

#include <span>
#include <vector>

#include "qmem/dynamics.hpp"
#include "qmem/profile.hpp"

namespace qmem {

/// Relative size of a divisor amplitude (against its branch maximum) below
/// which the synthesized coupling holds its last finite value.
inline constexpr double kGuardRelTol = 1e-8;

/// Couplings on `grid` that keep the bright mode empty. g1 is held at
/// mid.g1 for t >= 0 and g2 at mid.g2 for t <= 0; the other coupling follows
/// from the closed-form coefficients. The grid must be ascending.
ControlProfile control_profiles(const MidpointState& mid, const SystemParams& params, std::span<const double> grid);

struct RegimeReport {
  Regime forward = Regime::Degenerate;   ///< t >= 0 branch (C)
  Regime backward = Regime::Degenerate;  ///< t <= 0 branch (D')
  Regime overall = Regime::Degenerate;
};

/// Overdamped iff both branch roots are real, degenerate iff either vanishes
/// (or a coupling is zero), oscillatory otherwise.
RegimeReport regime_classify(const SystemParams& params, double g1_0, double g2_0);

/// Member of the one-parameter family of junction states compatible with the
/// couplings. theta in [0, 1] is an angle on the unit circle of the
/// constraint plane: theta = 0 gives beta = 0, theta = 1/2 the direction with
/// the largest beta. The result is scaled so the backward boundary matches the
/// initial occupancy. Throws InfeasiblePoint when no scaling fits.
MidpointState midpoint_family(const SystemParams& params, double g1_0, double g2_0, double theta,
                              const WindowOptions& window = {});

struct OptimizedMidpoint {
  MidpointState mid;
  double fidelity = 0.0;
  double theta = 0.0;
  int feasible_points = 0;
};

/// Grid points scanned before golden-section refinement.
inline constexpr int kFamilyGridPoints = 64;

/// Maximizes G over the family; ties within 1e-9 go to smaller |beta|, then
/// smaller theta. Throws InfeasiblePoint when every grid point is infeasible.
OptimizedMidpoint optimize_midpoint(const SystemParams& params, double g1_0, double g2_0,
                                    const WindowOptions& window = {});

}  // namespace qmem
