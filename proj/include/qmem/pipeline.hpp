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

// End-to-end runs shared by the CLI, sweeps and tests: window, grids,
// synthesized controls and the oracle evolution for one midpoint.

#include <vector>

#include "qmem/control.hpp"
#include "qmem/oracle.hpp"

namespace qmem {

struct GridOptions {
  WindowOptions window;
  /// Control sampling step; 0 selects default_profile_step.
  double profile_step = 0.0;
  /// Oracle step as a whole number of profile steps (even, so RK4 midpoints
  /// land on samples).
  int oracle_stride = 4;
};

struct TransferGrids {
  TimeWindow window;
  std::vector<double> oracle;   ///< oracle RK4 nodes
  std::vector<double> profile;  ///< control samples, covering the oracle nodes
};

TransferGrids transfer_grids(const MidpointState& mid, const SystemParams& params, const GridOptions& opts = {});

struct OracleRun {
  TransferGrids grids;
  ControlProfile controls;
  MasterResult master;
  /// Sign of the transferred amplitude relative to the stored one, from the
  /// closed form: sgn(alpha2(t_f) alpha1(t_i)).
  double output_phase = 1.0;
  double fidelity = 0.0;
};

/// Synthesizes controls for `mid` and evolves `input` through the network.
OracleRun run_oracle(const MidpointState& mid, const SystemParams& params, const QubitInput& input,
                     const TruncationSpec& trunc, const GridOptions& opts = {}, const EvolveOptions& evolve = {});

}  // namespace qmem
