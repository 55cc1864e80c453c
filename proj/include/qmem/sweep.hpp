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

// Fidelity sweeps over loss ratios, with oracle cross-checks on a subsample.

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmem/pipeline.hpp"
#include "qmem/report.hpp"

namespace qmem {

struct SweepAxis {
  std::string name;
  std::vector<double> values;
};

struct SweepResult {
  std::vector<SweepAxis> axes;  ///< one or two; points are axis-0 major
  std::vector<std::optional<double>> fidelity;
  std::vector<std::optional<double>> oracle;  ///< set on the cross-check subsample
  std::vector<std::string> notes;             ///< reason for a missing value
  std::vector<std::pair<std::string, std::string>> metadata;

  std::size_t size() const noexcept { return fidelity.size(); }
};

struct SweepOptions {
  /// Junction couplings g_n(0) = g_scale * kappa_ex,n.
  double g_scale = 0.5;
  /// Every n-th point is re-run through the oracle; 0 disables.
  std::size_t oracle_stride = 8;
  TruncationSpec oracle_truncation{2, 2, 2, 2};
  GridOptions grid;
  unsigned threads = 1;
};

/// Fidelity against kappa_i / kappa_ex for equal extrinsic couplings taken
/// from `base`; gamma_i = 0.
SweepResult sweep_intrinsic(const SystemParams& base, std::span<const double> ratios, const SweepOptions& opts = {});

/// Fidelity over (kappa_ex,1 / kappa_i, kappa_ex,2 / kappa_i) with kappa_i
/// and gamma_i from `base`.
SweepResult sweep_couplings(const SystemParams& base, std::span<const double> grid1, std::span<const double> grid2,
                            const SweepOptions& opts = {});

/// n points from lo to hi, evenly spaced in log10.
std::vector<double> log_space(double lo, double hi, std::size_t n);

/// Least-squares rate a of F ~ exp(-a r) through (0, 1), over present points with r > 0.
std::optional<double> exponential_rate(const SweepResult& r);

/// max |F(i, j) - F(j, i)| on a square 2-D sweep with identical axes.
std::optional<double> swap_asymmetry(const SweepResult& r);

Table to_table(const SweepResult& r);

/// Runs fn(i) for i in [0, n) on up to `threads` workers. Exceptions are
/// rethrown in index order after all workers finish.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn);

}  // namespace qmem
