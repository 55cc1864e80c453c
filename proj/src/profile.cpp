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

#include "qmem/profile.hpp"

#include <algorithm>
#include <cmath>

#include "qmem/errors.hpp"

namespace qmem {

std::string to_string(Regime r) {
  switch (r) {
    case Regime::Oscillatory:
      return "oscillatory";
    case Regime::Overdamped:
      return "overdamped";
    case Regime::Degenerate:
      return "degenerate";
  }
  return "unknown";
}

void ControlProfile::validate() const {
  if (g1.size() != time.size() || g2.size() != time.size()) {
    throw DimensionMismatch("control profile arrays have different lengths");
  }
  for (std::size_t k = 1; k < time.size(); ++k) {
    if (!(time[k] > time[k - 1])) throw InvalidParameter("control profile grid is not strictly ascending");
  }
}

std::pair<double, double> ControlProfile::at(double t) const {
  if (time.empty()) throw InvalidParameter("empty control profile");
  const double span = time.back() - time.front();
  const double slack = 1e-12 * std::max(1.0, std::abs(span));
  if (t < time.front() - slack || t > time.back() + slack) {
    throw InvalidParameter("time " + std::to_string(t) + " outside control profile");
  }
  if (time.size() == 1) return {g1.front(), g2.front()};
  auto it = std::upper_bound(time.begin(), time.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - time.begin());
  hi = std::clamp<std::size_t>(hi, 1, time.size() - 1);
  const std::size_t lo = hi - 1;
  const double h = time[hi] - time[lo];
  // Snap to a sample when the query lands on it up to round-off.
  const double snap = 1e-9 * h;
  if (std::abs(t - time[lo]) <= snap) return {g1[lo], g2[lo]};
  if (std::abs(t - time[hi]) <= snap) return {g1[hi], g2[hi]};
  const double w = std::clamp((t - time[lo]) / h, 0.0, 1.0);
  return {g1[lo] + w * (g1[hi] - g1[lo]), g2[lo] + w * (g2[hi] - g2[lo])};
}

}  // namespace qmem
