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

// Lindblad master-equation simulation of the composite two-block network on
// truncated Fock spaces, with time-dependent couplings.

#include <cstddef>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "qmem/dynamics.hpp"
#include "qmem/hilbert.hpp"
#include "qmem/profile.hpp"
#include "qmem/slh.hpp"

namespace qmem {

/// Refused above this many basis states.
inline constexpr std::size_t kMaxTotalDim = 1024;

/// Fock truncation of (a1, b1, a2, b2).
struct TruncationSpec {
  int a1 = 3;
  int b1 = 3;
  int a2 = 3;
  int b2 = 4;

  std::vector<int> dims() const { return {a1, b1, a2, b2}; }
  std::size_t total_dim() const;
  /// Each dim >= 2 and total <= kMaxTotalDim.
  void validate() const;
  /// Every dim increased by `by`.
  TruncationSpec raised(int by) const { return {a1 + by, b1 + by, a2 + by, b2 + by}; }
};

/// Generators of the composite network. H(g1, g2) = h_static + g1 h_g1 + g2 h_g2.
struct OpenSystem {
  ModeSpace space;
  OperatorMatrix h_static;
  OperatorMatrix h_g1;
  OperatorMatrix h_g2;
  std::vector<OperatorMatrix> lindblad;

  OperatorMatrix hamiltonian(double g1, double g2) const;
};

/// Composite (H, L) from the series product of the two block triples. The
/// Lindblad list is [sqrt(ki1) a1, sqrt(G1) b1, sqrt(k1) a1 + sqrt(k2) a2,
/// sqrt(ki2) a2, sqrt(G2) b2]. Per-block intrinsic losses may differ.
OpenSystem build_system(const SystemParams& params, const TruncationSpec& trunc);

struct DensityMatrix {
  ModeSpace space;
  CMatrix entries;

  static DensityMatrix pure(const ModeSpace& space, const CVector& psi);

  cplx trace() const { return entries.trace(); }
  /// max |rho - rho^dag|
  double hermiticity_error() const;
  /// Smallest eigenvalue of the Hermitian part.
  double min_eigenvalue() const;
  /// Hermitian to 1e-10, unit trace to 1e-9, eigenvalues >= -1e-9.
  void validate() const;
};

/// Amplitudes of the qubit stored in memory 1 before transfer.
struct QubitInput {
  cplx c_g{1.0, 0.0};
  cplx c_e{0.0, 0.0};

  /// |c_g|^2 + |c_e|^2 = 1 within 1e-12.
  void validate() const;
};

/// c_g |vac> + c_e |b1 = 1>.
DensityMatrix initial_state(const ModeSpace& space, const QubitInput& input);

/// c_g |vac> + phase c_e |b2 = 1>.
CVector target_state(const ModeSpace& space, const QubitInput& input, cplx phase = 1.0);

struct EvolveOptions {
  /// Steps between Hermiticity/positivity checks (the final state is always checked).
  std::size_t check_stride = 50;
  /// Steps between recorded states; 0 records only the endpoints.
  std::size_t record_stride = 0;
  /// Called at recorded times with the current state.
  std::function<void(double, const DensityMatrix&)> observer;
  /// Store recorded states in MasterResult::states.
  bool keep_states = true;
};

struct MasterResult {
  std::vector<double> time;
  std::vector<DensityMatrix> states;
  DensityMatrix final_state;
  double max_trace_drift = 0.0;
  double max_hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  std::size_t steps = 0;
};

/// Largest trace drift tolerated before the step is declared too coarse.
inline constexpr double kMaxTraceDrift = 1e-6;

/// Fixed-step RK4 of d rho/dt = -i[H, rho] + sum_k D[L_k] rho over `grid`
/// (ascending, first node = time of rho0). Couplings come from
/// ControlProfile::at at nodes and midpoints. Trace, Hermiticity and
/// positivity are monitored, never projected. Throws StepSizeError when the
/// trace drifts by more than kMaxTraceDrift.
MasterResult evolve_master(const OpenSystem& system, const DensityMatrix& rho0, const ControlProfile& controls,
                           std::span<const double> grid, const EvolveOptions& opts = {});

/// Oracle step: four default profile steps, so RK4 midpoints land on samples.
double default_oracle_step(const SystemParams& params);

/// Reduced occupation probabilities of one mode.
std::vector<double> fock_populations(const DensityMatrix& rho, std::string_view label);

/// Tr(rho op).
cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op);

/// Total occupation of basis states with more than one excitation.
double multi_excitation_population(const DensityMatrix& rho);

/// <target| rho |target> with target = c_g|vac> + phase c_e|b2 = 1>, clamped to [0, 1].
double transfer_fidelity(const DensityMatrix& rho, const QubitInput& input, cplx phase = 1.0);

}  // namespace qmem
