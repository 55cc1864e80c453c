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

// SLH triples for leaky memory blocks and their series composition.

#include <cstddef>
#include <vector>

#include "qmem/hilbert.hpp"

namespace qmem {

/// Loss and coupling rates of one memory block (angular units, any consistent
/// time base).
struct BlockParams {
  double kappa_ex = 0.0;  ///< extrinsic output coupling of the intermediate mode
  double kappa_i = 0.0;   ///< intrinsic loss of the intermediate mode
  double gamma_i = 0.0;   ///< decay of the memory mode

  /// Throws InvalidParameter on negative rates or non-positive kappa_ex.
  void validate() const;
};

/// (S, L, H) description of an open component. Ports index S rows and L.
struct SLHTriple {
  CMatrix S;
  std::vector<OperatorMatrix> L;
  OperatorMatrix H;

  std::size_t num_ports() const noexcept { return L.size(); }
  const ModeSpace& space() const noexcept { return H.space(); }

  /// S unitary, H Hermitian, |L| == dim S, every operator on H's space.
  void validate(double tol = kDefaultTol) const;
};

/// Port order of a single block triple.
enum BlockPort : std::size_t { kExtrinsicPort = 0, kIntrinsicPort = 1, kMemoryPort = 2 };

/// Triple of block 1 or 2: H = -g (a^dag b + a b^dag),
/// L = [sqrt(kappa_ex) a, sqrt(kappa_i) a, sqrt(gamma_i) b], S = I.
/// Modes are looked up as "a<block>" / "b<block>".
SLHTriple block_triple(const BlockParams& params, double g, int block, const ModeSpace& space);

/// Series product feeding output `port` of `upstream` into input `port` of
/// `downstream`. The connected port becomes L_down + S_down L_up and H gains
/// (1/2i)(L_down^dag S_down L_up - h.c.). Unconnected ports are kept in the
/// order [upstream..., connected, downstream...].
SLHTriple series_compose(const SLHTriple& upstream, const SLHTriple& downstream, std::size_t port);

/// H - (i/2) sum_n L_n^dag L_n over the listed ports.
OperatorMatrix effective_hamiltonian(const SLHTriple& triple, const std::vector<std::size_t>& ports);

/// All port indices of a triple, for effective_hamiltonian.
std::vector<std::size_t> all_ports(const SLHTriple& triple);

}  // namespace qmem
