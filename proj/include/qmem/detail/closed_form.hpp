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

// Closed-form branch evaluation shared by dynamics and control. Works in
// units scaled by kappa_ex,1 and in the Printed beta frame.

#include <span>
#include <vector>

#include "qmem/dynamics.hpp"

namespace qmem::detail {

struct ScaledParams {
  double kappa_ex1 = 1.0;
  double eps = 1.0;
  double ki = 0.0;
  double gam = 0.0;
  double sigma = 1.0;
};

/// Validates and scales; requires symmetric intrinsic losses.
ScaledParams scale(const SystemParams& params);

/// One branch of the closed form. Leaving amplitude x, arriving amplitude y,
/// dark amplitude b, all as functions of scaled time tau (negative for the
/// backward branch).
struct Branch {
  bool forward = true;
  double x0 = 0.0, y0 = 0.0, b0 = 0.0;
  double K = 1.0, ki = 0.0, gam = 0.0, g = 0.0, c = 0.0;
  double B1 = 0.0, B2 = 0.0, X = 0.0;
  cplx C;
  double coef1 = 0.0, coef2 = 0.0, coef3 = 0.0;
  double G = 0.0;
  double y_rate0 = 0.0;  ///< dy/dtau at tau = 0 (printed frame)

  struct Eval {
    cplx x;
    cplx b;
    cplx ysq;
    cplx transient;  ///< ysq minus the G e^{-gam tau} tail
  };

  Eval eval(double tau) const;
  /// d(y^2)/dtau from the amplitude equations.
  double slope(const Eval& e) const;
};

Branch make_branch(bool forward, const MidpointState& mid, const ScaledParams& s);

double real_checked(cplx v, const char* what);

/// Sub-step used for sign tracking and window scans.
double tracking_step(const Branch& br);

struct TrackedPoint {
  double x = 0.0;
  double y = 0.0;
  double b = 0.0;
};

/// Evaluates the branch at `taus`, ordered outward from 0, tracking the sign
/// of y through zero touches of y^2.
std::vector<TrackedPoint> track_branch(const Branch& br, std::span<const double> taus);

}  // namespace qmem::detail
