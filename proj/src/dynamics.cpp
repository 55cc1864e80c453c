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

#include "qmem/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <string>

#include "qmem/detail/closed_form.hpp"
#include "qmem/errors.hpp"

namespace qmem {

std::string to_string(BetaConvention c) { return c == BetaConvention::Printed ? "printed" : "flipped"; }

BetaConvention parse_convention(const std::string& s) {
  if (s == "printed") return BetaConvention::Printed;
  if (s == "flipped") return BetaConvention::Flipped;
  throw InvalidParameter("unknown beta convention '" + s + "' (expected printed|flipped)");
}

bool SystemParams::symmetric_intrinsic(double rel_tol) const {
  auto close = [rel_tol](double a, double b) {
    return std::abs(a - b) <= rel_tol * std::max({1e-300, std::abs(a), std::abs(b)});
  };
  return close(block1.kappa_i, block2.kappa_i) && close(block1.gamma_i, block2.gamma_i);
}

void SystemParams::validate() const {
  block1.validate();
  block2.validate();
}

SystemParams SystemParams::symmetric(double kappa_ex1, double kappa_ex2, double kappa_i, double gamma_i,
                                     BetaConvention convention) {
  SystemParams p{{kappa_ex1, kappa_i, gamma_i}, {kappa_ex2, kappa_i, gamma_i}, convention};
  p.validate();
  return p;
}

void CoefficientTrajectory::push_back(double t, const Coefficients& c, double res) {
  time.push_back(t);
  alpha1.push_back(c.alpha1);
  alpha2.push_back(c.alpha2);
  beta.push_back(c.beta);
  norm.push_back(c.norm());
  residual.push_back(res);
}

namespace detail {

ScaledParams scale(const SystemParams& params) {
  params.validate();
  if (!params.symmetric_intrinsic()) {
    throw InvalidParameter("closed-form branches require kappa_i and gamma_i equal in both blocks");
  }
  ScaledParams s;
  s.kappa_ex1 = params.block1.kappa_ex;
  s.eps = params.epsilon();
  s.ki = params.block1.kappa_i / s.kappa_ex1;
  s.gam = params.block1.gamma_i / s.kappa_ex1;
  s.sigma = params.beta_sign();
  return s;
}

namespace {

// e^{-a tau} times cosh(z), sinh(z)/C and (cosh(z)-1)/C^2 with z = C*u,
// written so neither growth of cosh nor small |C| loses the result.
struct Hyperbolic {
  cplx ch;
  cplx sh;
  cplx ch1;
  double damp;
};

Hyperbolic hyperbolic(cplx c, double u, double a, double tau) {
  const cplx z = c * u;
  const double damp = std::exp(-a * tau);
  if (std::abs(z) < 1e-2) {
    const cplx z2 = z * z;
    const cplx ch = 1.0 + z2 * (0.5 + z2 * (1.0 / 24.0 + z2 / 720.0));
    const cplx sh = u * (1.0 + z2 * (1.0 / 6.0 + z2 * (1.0 / 120.0 + z2 / 5040.0)));
    const cplx ch1 = u * u * (0.5 + z2 * (1.0 / 24.0 + z2 * (1.0 / 720.0 + z2 / 40320.0)));
    return {damp * ch, damp * sh, damp * ch1, damp};
  }
  const cplx ep = std::exp(-a * tau + z);
  const cplx em = std::exp(-a * tau - z);
  const cplx ch = 0.5 * (ep + em);
  return {ch, (ep - em) / (2.0 * c), (ch - damp) / (c * c), damp};
}

}  // namespace

Branch::Eval Branch::eval(double tau) const {
  const double rate = K + ki + gam;
  const Hyperbolic q = hyperbolic(C, tau / 4.0, rate / 4.0, tau);
  const Hyperbolic h = hyperbolic(C, tau / 2.0, rate / 2.0, tau);
  const cplx c2 = C * C;

  Eval e;
  e.x = x0 * q.ch + B2 * q.sh;
  e.b = b0 * q.ch - B1 * q.sh;
  const cplx a1 = (-c2 * h.damp - X * c2 * h.sh + X * X * (h.ch + h.damp)) / X;
  const cplx a2 = h.ch - X * h.sh;
  const cplx a3 = (h.damp - X * h.sh + X * X * h.ch1) / X;
  const cplx p = (coef1 * a1 + coef2 * a2 + coef3 * a3) / (16.0 * g * g);
  e.ysq = p + G * std::exp(-gam * tau);
  e.transient = p;
  return e;
}

double Branch::slope(const Eval& e) const {
  return K * e.b.real() * e.b.real() + c * e.x.real() * e.b.real() - gam * e.ysq.real();
}

Branch make_branch(bool forward, const MidpointState& mid, const ScaledParams& s) {
  const double g1 = mid.g1 / s.kappa_ex1;
  const double g2 = mid.g2 / s.kappa_ex1;
  const double beta = s.sigma * mid.beta;
  const double eps = s.eps;
  Branch br;
  br.forward = forward;
  br.ki = s.ki;
  br.gam = s.gam;
  br.b0 = beta;
  if (forward) {
    if (g1 == 0.0) throw InvalidParameter("g1(0) = 0: no transfer (degenerate forward branch)");
    br.x0 = mid.alpha1;
    br.y0 = mid.alpha2;
    br.K = 1.0;
    br.g = g1;
    br.c = 2.0 * g1 / std::sqrt(eps * (1.0 + eps));
    const double k = 1.0 + s.ki - s.gam;
    br.B1 = 4.0 * std::sqrt((1.0 + eps) / eps) * g1 * mid.alpha1 + beta * k;
    br.B2 = 4.0 * std::sqrt(eps / (1.0 + eps)) * g1 * beta + mid.alpha1 * k;
    br.y_rate0 = -g2 * beta / std::sqrt(1.0 + eps) - 0.5 * s.gam * mid.alpha2;
  } else {
    if (g2 == 0.0) throw InvalidParameter("g2(0) = 0: no transfer (degenerate backward branch)");
    br.x0 = mid.alpha2;
    br.y0 = mid.alpha1;
    br.K = -eps;
    br.g = g2;
    br.c = -2.0 * eps * g2 / std::sqrt(1.0 + eps);
    const double k = -eps + s.ki - s.gam;
    br.B1 = -4.0 * std::sqrt(1.0 + eps) * g2 * mid.alpha2 + beta * k;
    br.B2 = -4.0 * g2 / std::sqrt(1.0 + eps) * beta + mid.alpha2 * k;
    br.y_rate0 = std::sqrt(eps / (1.0 + eps)) * g1 * beta - 0.5 * s.gam * mid.alpha1;
  }
  br.X = s.gam - s.ki - br.K;
  if (br.X == 0.0) {
    throw NumericalDomain("closed form undefined: gamma_i - kappa_i - kappa_eff vanishes on the " +
                          std::string(forward ? "forward" : "backward") + " branch");
  }
  br.C = std::sqrt(cplx(br.X * br.X - 16.0 * br.g * br.g, 0.0));
  br.coef1 = br.K * br.b0 * br.b0 + br.c * br.x0 * br.b0;
  br.coef2 = 2.0 * br.K * br.B1 * br.b0 + br.c * (br.x0 * br.B1 - br.b0 * br.B2);
  br.coef3 = br.K * br.B1 * br.B1 - br.c * br.B1 * br.B2;
  br.G = 0.0;
  const cplx p0 = br.eval(0.0).transient;
  br.G = br.y0 * br.y0 - real_checked(p0, "transient at t = 0");
  return br;
}

double real_checked(cplx v, const char* what) {
  if (std::abs(v.imag()) > 1e-9 * std::max(1.0, std::abs(v.real()))) {
    throw InternalConsistency(std::string(what) + " has imaginary residue " + std::to_string(v.imag()));
  }
  return v.real();
}

double tracking_step(const Branch& br) { return std::min(0.05, 0.5 / std::max(std::abs(br.C), 1e-300)); }

namespace {

constexpr double kNegativeTol = 1e-12;
constexpr double kTouchTol = 1e-12;

double initial_sign(const Branch& br) {
  if (br.y0 != 0.0) return br.y0 > 0.0 ? 1.0 : -1.0;
  // y0 = 0: the first-order motion of y away from the junction fixes the sign.
  const double d = br.forward ? br.y_rate0 : -br.y_rate0;
  if (d == 0.0) return 1.0;
  return d > 0.0 ? 1.0 : -1.0;
}

}  // namespace

std::vector<TrackedPoint> track_branch(const Branch& br, std::span<const double> taus) {
  const double dir = br.forward ? 1.0 : -1.0;
  const double h = tracking_step(br);
  std::vector<TrackedPoint> out;
  out.reserve(taus.size());

  double sign = initial_sign(br);
  double prev = 0.0;
  double prev_slope = dir * br.slope(br.eval(0.0));

  auto locate_min = [&](double lo, double hi) {
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (dir * br.slope(br.eval(mid)) < 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  auto advance = [&](double to) -> Branch::Eval {
    const int n = std::max(1, static_cast<int>(std::ceil(std::abs(to - prev) / h)));
    Branch::Eval e{};
    double start = prev;
    for (int j = 1; j <= n; ++j) {
      const double t = j == n ? to : start + (to - start) * j / n;
      e = br.eval(t);
      const double sl = dir * br.slope(e);
      if (prev_slope < 0.0 && sl >= 0.0) {
        const double tm = locate_min(prev, t);
        const double fmin = br.eval(tm).ysq.real();
        if (fmin < -kNegativeTol) {
          throw NumericalDomain("squared amplitude reaches " + std::to_string(fmin) + " at scaled time " +
                                std::to_string(tm));
        }
        if (fmin <= kTouchTol) sign = -sign;
      }
      prev_slope = sl;
      prev = t;
    }
    return e;
  };

  for (double tau : taus) {
    if (tau == 0.0) {
      out.push_back({br.x0, br.y0, br.b0});
      continue;
    }
    const Branch::Eval e = advance(tau);
    const double x = real_checked(e.x, "leaving amplitude");
    const double b = real_checked(e.b, "dark amplitude");
    double ysq = real_checked(e.ysq, "squared arriving amplitude");
    if (ysq < -kNegativeTol) {
      throw NumericalDomain("squared amplitude is " + std::to_string(ysq) + " at scaled time " +
                            std::to_string(tau));
    }
    ysq = std::max(ysq, 0.0);
    out.push_back({x, sign * std::sqrt(ysq), b});
  }
  return out;
}

}  // namespace detail

StructureConstants structure_constants(const MidpointState& mid, const SystemParams& params) {
  const detail::ScaledParams s = detail::scale(params);
  const detail::Branch fwd = detail::make_branch(true, mid, s);
  const detail::Branch bwd = detail::make_branch(false, mid, s);
  StructureConstants sc;
  sc.C = fwd.C * s.kappa_ex1;
  sc.Dprime = bwd.C * s.kappa_ex1;
  sc.B1p = fwd.B1 * s.kappa_ex1;
  sc.B2p = fwd.B2 * s.kappa_ex1;
  sc.B3p = bwd.B1 * s.kappa_ex1;
  sc.B4p = bwd.B2 * s.kappa_ex1;
  sc.G = fwd.G;
  sc.Gprime = bwd.G;
  sc.forward_degenerate = std::abs(fwd.C) < kDegeneracyTol;
  sc.backward_degenerate = std::abs(bwd.C) < kDegeneracyTol;
  return sc;
}

std::vector<Coefficients> analytic_trajectory(std::span<const double> grid, const MidpointState& mid,
                                              const SystemParams& params) {
  const detail::ScaledParams s = detail::scale(params);
  std::vector<std::size_t> fwd_idx;
  std::vector<std::size_t> bwd_idx;
  for (std::size_t k = 0; k < grid.size(); ++k) (grid[k] >= 0.0 ? fwd_idx : bwd_idx).push_back(k);
  std::sort(fwd_idx.begin(), fwd_idx.end(), [&](auto a, auto b) { return grid[a] < grid[b]; });
  std::sort(bwd_idx.begin(), bwd_idx.end(), [&](auto a, auto b) { return grid[a] > grid[b]; });

  std::vector<Coefficients> out(grid.size());
  auto run = [&](bool forward, const std::vector<std::size_t>& idx) {
    if (idx.empty()) return;
    const detail::Branch br = detail::make_branch(forward, mid, s);
    std::vector<double> taus(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) taus[k] = grid[idx[k]] * s.kappa_ex1;
    const auto pts = detail::track_branch(br, taus);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      const auto& p = pts[k];
      Coefficients c;
      c.beta = s.sigma * p.b;
      if (forward) {
        c.alpha1 = p.x;
        c.alpha2 = p.y;
      } else {
        c.alpha2 = p.x;
        c.alpha1 = p.y;
      }
      out[idx[k]] = c;
    }
  };
  run(true, fwd_idx);
  run(false, bwd_idx);
  return out;
}

Coefficients coeffs_analytic(double t, const MidpointState& mid, const SystemParams& params) {
  const double grid[1] = {t};
  return analytic_trajectory(grid, mid, params).front();
}

Coefficients ode_rhs(const Coefficients& state, double g1, double g2, const SystemParams& params) {
  const double eps = params.epsilon();
  const double r = 1.0 / std::sqrt(1.0 + eps);
  const double se = std::sqrt(eps);
  const double sig = params.beta_sign();
  // Dark-mode loss: diagonal weight of the dark combination of the two
  // intermediate modes; reduces to kappa_i for symmetric blocks.
  const double kappa_dark = (eps * params.block1.kappa_i + params.block2.kappa_i) / (1.0 + eps);
  Coefficients d;
  d.alpha1 = sig * se * r * g1 * state.beta - 0.5 * params.block1.gamma_i * state.alpha1;
  d.alpha2 = -sig * r * g2 * state.beta - 0.5 * params.block2.gamma_i * state.alpha2;
  d.beta = sig * (r * g2 * state.alpha2 - se * r * g1 * state.alpha1) - 0.5 * kappa_dark * state.beta;
  return d;
}

double bright_residual(const Coefficients& state, double g1, double g2, const SystemParams& params) {
  const double eps = params.epsilon();
  const double r = 1.0 / std::sqrt(1.0 + eps);
  return r * g1 * state.alpha1 + std::sqrt(eps) * r * g2 * state.alpha2 +
         params.beta_sign() * 0.5 * params.block1.kappa_ex * std::sqrt(eps) * state.beta;
}

namespace {

Coefficients axpy(const Coefficients& y, double a, const Coefficients& x) {
  return {y.alpha1 + a * x.alpha1, y.alpha2 + a * x.alpha2, y.beta + a * x.beta};
}

Coefficients rk4_step(const Coefficients& y, double h, std::pair<double, double> g0,
                      std::pair<double, double> gm, std::pair<double, double> g1, const SystemParams& p) {
  const Coefficients k1 = ode_rhs(y, g0.first, g0.second, p);
  const Coefficients k2 = ode_rhs(axpy(y, 0.5 * h, k1), gm.first, gm.second, p);
  const Coefficients k3 = ode_rhs(axpy(y, 0.5 * h, k2), gm.first, gm.second, p);
  const Coefficients k4 = ode_rhs(axpy(y, h, k3), g1.first, g1.second, p);
  return {y.alpha1 + h / 6.0 * (k1.alpha1 + 2.0 * k2.alpha1 + 2.0 * k3.alpha1 + k4.alpha1),
          y.alpha2 + h / 6.0 * (k1.alpha2 + 2.0 * k2.alpha2 + 2.0 * k3.alpha2 + k4.alpha2),
          y.beta + h / 6.0 * (k1.beta + 2.0 * k2.beta + 2.0 * k3.beta + k4.beta)};
}

double max_diff(const Coefficients& a, const Coefficients& b) {
  return std::max({std::abs(a.alpha1 - b.alpha1), std::abs(a.alpha2 - b.alpha2), std::abs(a.beta - b.beta)});
}

}  // namespace

CoefficientTrajectory integrate_effective(const ControlProfile& controls, const Coefficients& init,
                                          const SystemParams& params, std::span<const double> grid) {
  params.validate();
  controls.validate();
  if (grid.empty()) throw InvalidParameter("integrate_effective: empty grid");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw InvalidParameter("integrate_effective: grid is not ascending");
  }

  CoefficientTrajectory traj;
  traj.time.reserve(grid.size());
  Coefficients y = init;
  auto g_prev = controls.at(grid[0]);
  traj.push_back(grid[0], y, bright_residual(y, g_prev.first, g_prev.second, params));

  // Pairs are aligned so that the point nearest t = 0 is a pair boundary; the
  // controls have a kink there.
  std::size_t i0 = 0;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (std::abs(grid[k]) < std::abs(grid[i0])) i0 = k;
  }

  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double t0 = grid[k];
    const double h = grid[k + 1] - t0;
    const auto gm = controls.at(t0 + 0.5 * h);
    const auto g_next = controls.at(grid[k + 1]);
    const Coefficients y1 = rk4_step(y, h, g_prev, gm, g_next, params);

    // Step doubling over each pair of equal steps: one step of 2h against two
    // steps of h, Richardson factor 1/15.
    if (k > 0 && (k + i0) % 2 == 1) {
      const double t_start = grid[k - 1];
      const double hh = grid[k] - t_start;
      if (std::abs(hh - h) <= 1e-9 * h) {
        const Coefficients y_start = {traj.alpha1[k - 1], traj.alpha2[k - 1], traj.beta[k - 1]};
        const Coefficients big =
            rk4_step(y_start, 2.0 * h, controls.at(t_start), controls.at(grid[k]), g_next, params);
        const double err = max_diff(big, y1) / 15.0;
        if (err > kMaxLocalError) {
          char buf[128];
          std::snprintf(buf, sizeof buf, "RK4 local error estimate %.3g at t = %.6g exceeds 1e-8; refine the grid",
                        err, t0);
          throw StepSizeError(buf);
        }
      }
    }
    y = y1;
    g_prev = g_next;
    traj.push_back(grid[k + 1], y, bright_residual(y, g_next.first, g_next.second, params));
  }
  return traj;
}

CoefficientTrajectory analytic_coefficient_trajectory(std::span<const double> grid, const MidpointState& mid,
                                                      const ControlProfile& controls,
                                                      const SystemParams& params) {
  const auto coeffs = analytic_trajectory(grid, mid, params);
  CoefficientTrajectory traj;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto g = controls.at(grid[k]);
    traj.push_back(grid[k], coeffs[k], bright_residual(coeffs[k], g.first, g.second, params));
  }
  return traj;
}

TimeWindow transfer_window(const MidpointState& mid, const SystemParams& params, const WindowOptions& opts) {
  const detail::ScaledParams s = detail::scale(params);
  const double cap = opts.cap / std::min(1.0, s.eps);
  TimeWindow w;

  auto scan = [&](bool forward) {
    const detail::Branch br = detail::make_branch(forward, mid, s);
    const double h = detail::tracking_step(br);
    const int n = static_cast<int>(std::ceil(cap / h));
    double last_bad = 0.0;
    for (int j = 1; j <= n; ++j) {
      const double tau = std::min(cap, j * h);
      const auto e = br.eval(forward ? tau : -tau);
      const double metric = std::norm(e.x) + std::norm(e.b) + (forward ? 0.0 : std::abs(e.transient));
      if (metric >= opts.tol) last_bad = tau;
    }
    const double end = std::min(cap, last_bad + h);
    return std::pair{end, last_bad + h >= cap};
  };

  const auto [tf, fcap] = scan(true);
  const auto [ti, icap] = scan(false);
  w.t_final = tf / s.kappa_ex1;
  w.t_initial = -ti / s.kappa_ex1;
  w.final_capped = fcap;
  w.initial_capped = icap;
  return w;
}

std::vector<double> uniform_grid(const TimeWindow& window, double dt) {
  if (!(dt > 0.0)) throw InvalidParameter("grid step must be positive");
  if (window.t_initial > 0.0 || window.t_final < 0.0) throw InvalidParameter("window must contain t = 0");
  const auto n_i = static_cast<long>(std::ceil(-window.t_initial / dt - 1e-9));
  const auto n_f = static_cast<long>(std::ceil(window.t_final / dt - 1e-9));
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n_i + n_f + 1));
  for (long k = -n_i; k <= n_f; ++k) grid.push_back(static_cast<double>(k) * dt);
  return grid;
}

std::vector<double> half_rate_grid(std::span<const double> grid) {
  const auto zero = std::lower_bound(grid.begin(), grid.end(), 0.0);
  if (zero == grid.end() || *zero != 0.0) throw InvalidParameter("half_rate_grid: grid must contain t = 0");
  const auto offset = static_cast<std::size_t>(zero - grid.begin()) % 2;
  std::vector<double> out;
  out.reserve(grid.size() / 2 + 1);
  for (std::size_t k = offset; k < grid.size(); k += 2) out.push_back(grid[k]);
  return out;
}

double default_profile_step(const SystemParams& params) {
  return 1e-3 / std::max(params.block1.kappa_ex, params.block2.kappa_ex);
}

}  // namespace qmem
