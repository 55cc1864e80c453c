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

#include "qmem/pipeline.hpp"

#include <cmath>

#include "qmem/errors.hpp"

namespace qmem {

TransferGrids transfer_grids(const MidpointState& mid, const SystemParams& params, const GridOptions& opts) {
  if (opts.oracle_stride < 2 || opts.oracle_stride % 2 != 0) {
    throw InvalidParameter("oracle stride must be a positive even number of profile steps");
  }
  const double step = opts.profile_step > 0.0 ? opts.profile_step : default_profile_step(params);
  TransferGrids g;
  g.window = transfer_window(mid, params, opts.window);
  g.oracle = uniform_grid(g.window, step * opts.oracle_stride);
  g.profile = uniform_grid(TimeWindow{g.oracle.front(), g.oracle.back()}, step);
  return g;
}

OracleRun run_oracle(const MidpointState& mid, const SystemParams& params, const QubitInput& input,
                     const TruncationSpec& trunc, const GridOptions& opts, const EvolveOptions& evolve) {
  TransferGrids grids = transfer_grids(mid, params, opts);
  ControlProfile controls = control_profiles(mid, params, grids.profile);
  const OpenSystem sys = build_system(params, trunc);
  MasterResult master = evolve_master(sys, initial_state(sys.space, input), controls, grids.oracle, evolve);
  const Coefficients first = coeffs_analytic(grids.oracle.front(), mid, params);
  const Coefficients last = coeffs_analytic(grids.oracle.back(), mid, params);
  const double phase = first.alpha1 * last.alpha2 < 0.0 ? -1.0 : 1.0;
  const double fidelity = transfer_fidelity(master.final_state, input, phase);
  return {std::move(grids), std::move(controls), std::move(master), phase, fidelity};
}

}  // namespace qmem
