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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "qmem/control.hpp"
#include "qmem/errors.hpp"

using namespace qmem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const double kEx = kTwoPi * 5.0;
const double kIn = kTwoPi * 0.1;

SystemParams reference_params() { return SystemParams::symmetric(kEx, kEx, kIn, 0.0); }

const MidpointState kSymmetric{0.7, -0.7, 0.0, kEx, kEx};

struct Synth {
  TimeWindow window;
  std::vector<double> grid;
  ControlProfile prof;
};

Synth synthesize(const MidpointState& mid, const SystemParams& p, double cap = 25.0) {
  Synth s;
  s.window = transfer_window(mid, p, {1e-6, cap});
  s.grid = uniform_grid(s.window, default_profile_step(p));
  s.prof = control_profiles(mid, p, s.grid);
  return s;
}

// Family member closest to a target junction state.
MidpointState nearest_member(const SystemParams& p, double g1, double g2, const Coefficients& target) {
  MidpointState best{};
  double best_d = INFINITY;
  for (int k = 0; k <= 2000; ++k) {
    MidpointState m;
    try {
      m = midpoint_family(p, g1, g2, k / 2000.0, {1e-6, 100.0});
    } catch (const InfeasiblePoint&) {
      continue;
    }
    const double d = std::hypot(m.alpha1 - target.alpha1, m.alpha2 - target.alpha2, m.beta - target.beta);
    if (d < best_d) {
      best_d = d;
      best = m;
    }
  }
  return best;
}

}  // namespace

TEST_CASE("g1 is held for t >= 0 and g2 for t <= 0") {
  const Synth s = synthesize(kSymmetric, reference_params());
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    if (s.grid[k] >= 0.0) CHECK(s.prof.g1[k] == kEx);
    if (s.grid[k] <= 0.0) CHECK(s.prof.g2[k] == kEx);
  }
  CHECK(s.prof.regime == Regime::Oscillatory);
}

TEST_CASE("symmetric couplings give time-reversed controls") {
  const Synth s = synthesize(kSymmetric, reference_params());
  double dev = 0.0;
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    const double t = s.grid[k];
    if (-t < s.prof.time.front() || -t > s.prof.time.back()) continue;
    dev = std::max(dev, std::abs(s.prof.g2[k] - s.prof.at(-t).first));
  }
  CHECK(dev <= 0.02 * kEx);
}

TEST_CASE("controls keep the bright mode empty") {
  const SystemParams p = reference_params();
  const Synth s = synthesize(kSymmetric, p);
  const std::vector<double> grid = half_rate_grid(s.grid);
  const CoefficientTrajectory exact = analytic_coefficient_trajectory(grid, kSymmetric, s.prof, p);
  const CoefficientTrajectory rk = integrate_effective(s.prof, exact.at(0), p, grid);
  double worst = 0.0;
  for (double r : rk.residual) worst = std::max(worst, std::abs(r));
  CHECK(worst < 1e-8 * kEx);
  CHECK(s.prof.diagnostics.empty());
}

TEST_CASE("controls are continuous at t = 0") {
  const Synth s = synthesize(kSymmetric, reference_params());
  const auto it = std::lower_bound(s.grid.begin(), s.grid.end(), 0.0);
  REQUIRE(it != s.grid.end());
  const std::size_t k = static_cast<std::size_t>(it - s.grid.begin());
  CHECK(s.grid[k] == 0.0);
  CHECK(s.prof.g1[k] == kEx);
  CHECK(s.prof.g2[k] == kEx);
  CHECK(s.prof.g1[k - 1] == doctest::Approx(kEx).epsilon(1e-3));
  CHECK(s.prof.g2[k + 1] == doctest::Approx(kEx).epsilon(1e-3));
}

TEST_CASE("regime classification") {
  const SystemParams p = reference_params();
  CHECK(regime_classify(p, 0.2 * kEx, 0.2 * kEx).overall == Regime::Overdamped);
  CHECK(regime_classify(p, kEx, kEx).overall == Regime::Oscillatory);
  CHECK(regime_classify(p, 0.0, kEx).overall == Regime::Degenerate);
  const SystemParams lossless = SystemParams::symmetric(1.0, 1.0, 0.0, 0.0);
  CHECK(regime_classify(lossless, 0.25, 0.25).overall == Regime::Degenerate);
  CHECK(to_string(Regime::Overdamped) == "overdamped");
}

TEST_CASE("family member with beta = 0") {
  const MidpointState m = midpoint_family(reference_params(), kEx, kEx, 0.0);
  CHECK(m.beta == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(m.alpha1 == doctest::Approx(-m.alpha2).epsilon(1e-12));
  CHECK(m.alpha1 * m.alpha1 + m.alpha2 * m.alpha2 == doctest::Approx(0.98).epsilon(1e-9));
  CHECK(m.alpha1 == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(structure_constants(m, reference_params()).Gprime == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("family members satisfy the constraint") {
  const SystemParams p = reference_params();
  for (double theta : {0.1, 0.25, 0.5, 0.8}) {
    CAPTURE(theta);
    const MidpointState m = midpoint_family(p, 0.4 * kEx, 0.7 * kEx, theta);
    CHECK(std::abs(bright_residual(m.coefficients(), m.g1, m.g2, p)) < 1e-12 * kEx);
    CHECK(structure_constants(m, p).Gprime == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(midpoint_family(p, kEx, kEx, 0.5).beta > 0.0);
}

TEST_CASE("overdamped member near the reference point") {
  const SystemParams p = reference_params();
  const MidpointState m = nearest_member(p, 0.2 * kEx, 0.2 * kEx, {0.7435, 0.5470, 0.3650});
  CHECK(m.alpha1 == doctest::Approx(0.7435).epsilon(5e-3));
  CHECK(m.alpha2 == doctest::Approx(0.5470).epsilon(5e-3));
  CHECK(m.beta == doctest::Approx(0.3650).epsilon(5e-3));
  const Synth s = synthesize(m, p, 100.0);
  CHECK(s.prof.regime == Regime::Overdamped);
  for (std::size_t k = 0; k < s.grid.size(); ++k) {
    CHECK(s.prof.g1[k] >= 0.0);
    CHECK(s.prof.g2[k] >= 0.0);
  }
  // Each varying coupling rises to a single peak and then decays towards 0.
  const auto peak2 = std::max_element(s.prof.g2.begin(), s.prof.g2.end());
  CHECK(std::is_sorted(peak2, s.prof.g2.end(), std::greater<>()));
  const auto peak1 = std::max_element(s.prof.g1.begin(), s.prof.g1.end());
  CHECK(std::is_sorted(s.prof.g1.begin(), peak1 + 1));
  CHECK(s.prof.g2.back() < 0.05 * m.g2);
  CHECK(s.prof.g1.front() < 0.05 * m.g1);
}

TEST_CASE("optimizer") {
  const SystemParams p = reference_params();
  const OptimizedMidpoint o = optimize_midpoint(p, kEx, kEx);
  CHECK(o.fidelity == doctest::Approx(0.96).epsilon(0.01));
  CHECK(o.fidelity == doctest::Approx(0.96078431).epsilon(1e-7));
  CHECK(o.mid.alpha1 == doctest::Approx(0.7).epsilon(1e-6));
  CHECK(o.mid.alpha2 == doctest::Approx(-0.7).epsilon(1e-6));
  CHECK(std::abs(o.mid.beta) < 1e-9);
  CHECK(o.feasible_points > 0);

  for (double s : {0.2, 0.5}) {
    CHECK(optimize_midpoint(p, s * kEx, s * kEx).fidelity == doctest::Approx(o.fidelity).epsilon(0.005));
  }

  const SystemParams lossless = SystemParams::symmetric(kEx, kEx, 0.0, 0.0);
  CHECK(optimize_midpoint(lossless, kEx, kEx).fidelity == doctest::Approx(1.0).epsilon(1e-6));

  const OptimizedMidpoint again = optimize_midpoint(p, kEx, kEx);
  CHECK(again.fidelity == o.fidelity);
  CHECK(again.mid.alpha1 == o.mid.alpha1);
  CHECK(again.theta == o.theta);
}

TEST_CASE("infeasible inputs") {
  const SystemParams p = reference_params();
  CHECK_THROWS_AS(midpoint_family(p, 0.0, kEx, 0.0), InfeasiblePoint);
  CHECK_THROWS_AS(midpoint_family(p, kEx, kEx, 1.5), InvalidParameter);
  std::vector<double> grid{1.0, 0.0};
  CHECK_THROWS_AS(control_profiles(kSymmetric, p, grid), InvalidParameter);
}
