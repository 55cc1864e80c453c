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

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace qmem {

/// Dynamical regime of a control branch.
enum class Regime { Oscillatory, Overdamped, Degenerate };

std::string to_string(Regime r);

/// One hold-last-value event of the control division guard.
struct GuardEvent {
  double time = 0.0;
  int control = 0;  ///< 1 for g1, 2 for g2
  double held_value = 0.0;
};

/// Sampled coupling rates g1(t), g2(t) on an ascending time grid.
struct ControlProfile {
  std::vector<double> time;
  std::vector<double> g1;
  std::vector<double> g2;
  Regime regime = Regime::Degenerate;
  std::vector<GuardEvent> diagnostics;

  std::size_t size() const noexcept { return time.size(); }

  /// (g1, g2) at t by linear interpolation. Exact on samples; throws
  /// InvalidParameter outside [front, back].
  std::pair<double, double> at(double t) const;

  /// Sizes agree, grid strictly ascending.
  void validate() const;
};

}  // namespace qmem
