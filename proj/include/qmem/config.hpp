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

// Run configuration: JSON (schema/run-config.schema.json), frequencies in
// GHz, times in ns. Converted to angular rates (rad/ns) on load.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmem/pipeline.hpp"
#include "qmem/sweep.hpp"

namespace qmem {

inline constexpr int kSchemaVersion = 1;

struct SweepConfig {
  std::vector<double> ratios;  ///< kappa_i / kappa_ex
  std::vector<double> grid1;   ///< kappa_ex1 / kappa_i
  std::vector<double> grid2;   ///< kappa_ex2 / kappa_i
  double g_scale = 0.5;
  std::size_t oracle_stride = 8;
  TruncationSpec oracle_truncation{2, 2, 2, 2};
};

struct RunConfig {
  SystemParams params;
  double g1_0 = 0.5;  ///< units of kappa_ex,1
  double g2_0 = 0.5;
  std::optional<Coefficients> midpoint;  ///< nullopt: optimize
  QubitInput input{0.0, 1.0};
  TruncationSpec truncation;
  GridOptions grid;
  std::size_t output_stride = 10;
  std::size_t check_stride = 50;
  SweepConfig sweep;
  std::filesystem::path output_dir = ".";
  std::optional<unsigned> threads;
  /// Sorted-key serialization of the input document.
  std::string canonical;

  /// 16 hex digits of FNV-1a over `canonical`.
  std::string hash() const;
  double g1_rate() const { return g1_0 * params.block1.kappa_ex; }
  double g2_rate() const { return g2_0 * params.block1.kappa_ex; }
};

/// Throws ConfigError naming the offending key.
RunConfig parse_config(std::string_view json_text);
RunConfig load_config(const std::filesystem::path& path);

std::uint64_t fnv1a64(std::string_view bytes);

/// GHz (ordinary frequency) to rad/ns.
inline double ghz_to_rate(double ghz) { return 2.0 * 3.14159265358979323846 * ghz; }
inline double rate_to_ghz(double rate) { return rate / (2.0 * 3.14159265358979323846); }

}  // namespace qmem
