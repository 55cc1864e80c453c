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

#include "qmem/control.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "qmem/detail/closed_form.hpp"
#include "qmem/errors.hpp"

namespace qmem {

namespace {

// g1 for t <= 0 (g2 held) and g2 for t >= 0 (g1 held), printed frame.
double backward_g1(const Coefficients& c, double beta_int, double g2_0, double k1, double eps) {
  return -(k1 * std::sqrt(eps * (1.0 + eps)) / 2.0 * beta_int + std::sqrt(eps) * g2_0 * c.alpha2) / c.alpha1;
}

double forward_g2(const Coefficients& c, double beta_int, double g1_0, double k1, double eps) {
  return -(k1 * std::sqrt(1.0 + eps) / 2.0 * beta_int + g1_0 * c.alpha1 / std::sqrt(eps)) / c.alpha2;
}

}  // namespace

ControlProfile control_profiles(const MidpointState& mid, const SystemParams& params, std::span<const double> grid) {
  params.validate();
  if (grid.empty()) throw InvalidParameter("control_profiles: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw InvalidParameter("control_profiles: grid is not ascending");
  }

  const auto coeffs = analytic_trajectory(grid, mid, params);
  const double k1 = params.block1.kappa_ex;
  const double eps = params.epsilon();
  const double sig = params.beta_sign();

  ControlProfile prof;
  prof.time.assign(grid.begin(), grid.end());
  prof.g1.assign(grid.size(), mid.g1);
  prof.g2.assign(grid.size(), mid.g2);
  prof.regime = regime_classify(params, mid.g1, mid.g2).overall;

  // Index of the first sample with t >= 0.
  const auto split = static_cast<std::size_t>(std::lower_bound(grid.begin(), grid.end(), 0.0) - grid.begin());

  double max_a1 = std::abs(mid.alpha1);
  for (std::size_t k = 0; k < split; ++k) max_a1 = std::max(max_a1, std::abs(coeffs[k].alpha1));
  double held = mid.g1;
  for (std::size_t k = split; k-- > 0;) {
    const auto& c = coeffs[k];
    if (std::abs(c.alpha1) < kGuardRelTol * max_a1) {
      prof.diagnostics.push_back({grid[k], 1, held});
    } else {
      held = backward_g1(c, sig * c.beta, mid.g2, k1, eps);
    }
    prof.g1[k] = held;
  }

  double max_a2 = std::abs(mid.alpha2);
  for (std::size_t k = split; k < grid.size(); ++k) max_a2 = std::max(max_a2, std::abs(coeffs[k].alpha2));
  held = mid.g2;
  for (std::size_t k = split; k < grid.size(); ++k) {
    if (grid[k] == 0.0) continue;
    const auto& c = coeffs[k];
    if (std::abs(c.alpha2) < kGuardRelTol * max_a2) {
      prof.diagnostics.push_back({grid[k], 2, held});
    } else {
      held = forward_g2(c, sig * c.beta, mid.g1, k1, eps);
    }
    prof.g2[k] = held;
  }
  std::sort(prof.diagnostics.begin(), prof.diagnostics.end(),
            [](const GuardEvent& a, const GuardEvent& b) { return a.time < b.time; });
  return prof;
}

RegimeReport regime_classify(const SystemParams& params, double g1_0, double g2_0) {
  params.validate();
  const double k1 = params.block1.kappa_ex;
  const double eps = params.epsilon();
  const double ki = params.block1.kappa_i / k1;
  const double gam = params.block1.gamma_i / k1;

  auto classify = [&](double g, double x) {
    if (g == 0.0) return Regime::Degenerate;
    const double c2 = x * x - 16.0 * g * g;
    if (std::sqrt(std::abs(c2)) < kDegeneracyTol) return Regime::Degenerate;
    return c2 > 0.0 ? Regime::Overdamped : Regime::Oscillatory;
  };

  RegimeReport r;
  r.forward = classify(g1_0 / k1, gam - ki - 1.0);
  r.backward = classify(g2_0 / k1, gam - ki + eps);
  if (r.forward == Regime::Degenerate || r.backward == Regime::Degenerate) {
    r.overall = Regime::Degenerate;
  } else if (r.forward == Regime::Overdamped && r.backward == Regime::Overdamped) {
    r.overall = Regime::Overdamped;
  } else {
    r.overall = Regime::Oscillatory;
  }
  return r;
}

namespace {

using Vec3 = std::array<double, 3>;

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

Vec3 normalized(Vec3 v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  for (auto& x : v) x /= n;
  return v;
}

// Unit direction on the constraint circle, in the caller's beta frame.
Vec3 family_direction(const SystemParams& params, double g1_0, double g2_0, double theta) {
  const double eps = params.epsilon();
  const double s = 1.0 / std::sqrt(1.0 + eps);
  const double sig = params.beta_sign();
  // Constraint normal in (alpha1, alpha2, beta_caller) coordinates.
  const Vec3 n = {g1_0 * s, std::sqrt(eps) * s * g2_0, sig * params.block1.kappa_ex * std::sqrt(eps) / 2.0};
  const Vec3 u = normalized({std::sqrt(eps) * g2_0, -g1_0, 0.0});
  Vec3 v = normalized(cross(n, u));
  if (v[2] < 0.0) {
    for (auto& x : v) x = -x;
  }
  const double a = std::numbers::pi * theta;
  return {std::cos(a) * u[0] + std::sin(a) * v[0], std::cos(a) * u[1] + std::sin(a) * v[1],
          std::cos(a) * u[2] + std::sin(a) * v[2]};
}

MidpointState scaled_member(const Vec3& d, double g1_0, double g2_0, double target, const SystemParams& params) {
  MidpointState m{d[0], d[1], d[2], g1_0, g2_0};
  const double gp = structure_constants(m, params).Gprime;
  if (!(gp > 0.0)) throw InfeasiblePoint("family member has non-positive backward boundary value");
  const double lambda = std::sqrt(target / gp);
  m.alpha1 *= lambda;
  m.alpha2 *= lambda;
  m.beta *= lambda;
  if (m.coefficients().norm() > 1.0 + 1e-12) {
    throw InfeasiblePoint("family member would need norm " + std::to_string(m.coefficients().norm()) + " > 1");
  }
  return m;
}

}  // namespace

MidpointState midpoint_family(const SystemParams& params, double g1_0, double g2_0, double theta,
                              const WindowOptions& window) {
  params.validate();
  if (!(theta >= 0.0 && theta <= 1.0)) throw InvalidParameter("family parameter theta must lie in [0, 1]");
  if (g1_0 == 0.0 || g2_0 == 0.0) throw InfeasiblePoint("zero coupling at the junction: no transfer");
  const Vec3 d = family_direction(params, g1_0, g2_0, theta);
  MidpointState m = scaled_member(d, g1_0, g2_0, 1.0, params);
  const double gamma = params.block1.gamma_i;
  if (gamma > 0.0) {
    // One fixed-point pass: the backward boundary decays over the window.
    const TimeWindow w = transfer_window(m, params, window);
    m = scaled_member(d, g1_0, g2_0, std::exp(gamma * w.t_initial), params);
  }
  return m;
}

OptimizedMidpoint optimize_midpoint(const SystemParams& params, double g1_0, double g2_0,
                                    const WindowOptions& window) {
  struct Sample {
    double theta;
    double value;
    MidpointState mid;
    bool ok;
  };
  auto evaluate = [&](double theta) -> Sample {
    try {
      MidpointState m = midpoint_family(params, g1_0, g2_0, theta, window);
      return {theta, structure_constants(m, params).G, m, true};
    } catch (const InfeasiblePoint&) {
      return {theta, 0.0, {}, false};
    }
  };
  auto better = [](const Sample& a, const Sample& b) {
    if (!b.ok) return a.ok;
    if (!a.ok) return false;
    if (a.value > b.value + 1e-9) return true;
    if (b.value > a.value + 1e-9) return false;
    const double ba = std::abs(a.mid.beta);
    const double bb = std::abs(b.mid.beta);
    if (ba < bb - 1e-12) return true;
    if (bb < ba - 1e-12) return false;
    return a.theta < b.theta;
  };

  std::vector<Sample> grid;
  grid.reserve(kFamilyGridPoints + 1);
  int feasible = 0;
  for (int k = 0; k <= kFamilyGridPoints; ++k) {
    grid.push_back(evaluate(static_cast<double>(k) / kFamilyGridPoints));
    feasible += grid.back().ok ? 1 : 0;
  }
  std::size_t best = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (better(grid[k], grid[best])) best = k;
  }
  if (!grid[best].ok) throw InfeasiblePoint("no feasible midpoint for the given couplings");

  // Golden-section refinement inside the neighbouring grid cells.
  double lo = grid[best == 0 ? 0 : best - 1].theta;
  double hi = grid[std::min(best + 1, grid.size() - 1)].theta;
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  Sample c = evaluate(hi - phi * (hi - lo));
  Sample d = evaluate(lo + phi * (hi - lo));
  while (hi - lo > 1e-6) {
    const double fc = c.ok ? c.value : -1.0;
    const double fd = d.ok ? d.value : -1.0;
    if (fc >= fd) {
      hi = d.theta;
      d = c;
      c = evaluate(hi - phi * (hi - lo));
    } else {
      lo = c.theta;
      c = d;
      d = evaluate(lo + phi * (hi - lo));
    }
  }
  Sample result = grid[best];
  for (const Sample& s : {c, d}) {
    if (s.ok && s.value > result.value + 1e-9) result = s;
  }
  return {result.mid, result.value, result.theta, feasible};
}

}  // namespace qmem
