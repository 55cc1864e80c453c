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

// Tabular output: RFC-4180 CSV with leading "# key: value" metadata lines,
// and static SVG 1.1 plots.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace qmem {

struct Table {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
  std::optional<std::string> meta(std::string_view key) const;
  /// Numeric cell; nullopt for an empty field.
  std::optional<double> number(std::size_t row, std::size_t col) const;
};

/// Shortest decimal that round-trips (%.17g); empty for nullopt.
std::string format_number(std::optional<double> v);

std::string to_csv(const Table& t);
/// Parses the output of to_csv. Throws IoError on malformed input.
Table parse_csv(std::string_view text);

enum class PlotKind { Lines, Heatmap };

struct PlotSpec {
  PlotKind kind = PlotKind::Lines;
  std::string title;
  std::string x_column;
  std::vector<std::string> y_columns;  ///< Lines: one series per column
  std::string y_column;                ///< Heatmap: second axis
  std::string value_column;            ///< Heatmap: cell value
  std::string x_label;
  std::string y_label;
  bool log_x = false;
};

std::string to_svg(const Table& t, const PlotSpec& spec);

/// Plot description recorded in a table's metadata by the producers below.
PlotSpec default_plot(const Table& t);

/// Writes bytes verbatim; IoError names the path on failure.
void write_text(const std::filesystem::path& path, std::string_view content);
std::string read_text(const std::filesystem::path& path);

}  // namespace qmem
