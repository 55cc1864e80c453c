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

// Composite Hamiltonian and Lindblad operators of the two-block network,
// written out entry by entry from ladder-operator action on occupation
// tuples (a1, b1, a2, b2). Independent of the kron/embed machinery.

#include <array>
#include <cmath>
#include <vector>

#include "qmem/hilbert.hpp"

namespace golden {

struct Rates {
  double kex1, kex2, ki1, ki2, gi1, gi2, g1, g2;
};

struct Network {
  qmem::CMatrix H;
  std::vector<qmem::CMatrix> L;
};

inline Network network(const Rates& r, const std::array<int, 4>& dims) {
  using qmem::cplx;
  const int n = dims[0] * dims[1] * dims[2] * dims[3];
  auto index = [&](const std::array<int, 4>& o) {
    return ((o[0] * dims[1] + o[1]) * dims[2] + o[2]) * dims[3] + o[3];
  };
  std::vector<std::array<int, 4>> occ(n);
  for (int i = 0; i < n; ++i) {
    int rest = i;
    for (int m = 3; m >= 0; --m) {
      occ[i][m] = rest % dims[m];
      rest /= dims[m];
    }
  }
  Network net{qmem::CMatrix::Zero(n, n), std::vector<qmem::CMatrix>(5, qmem::CMatrix::Zero(n, n))};
  // <out| c_j^dag c_k |in>, with j == -1 meaning no raising operator.
  auto add = [&](qmem::CMatrix& m, cplx coef, int raise, int lower) {
    for (int i = 0; i < n; ++i) {
      std::array<int, 4> o = occ[i];
      double amp = 1.0;
      if (lower >= 0) {
        if (o[lower] == 0) continue;
        amp *= std::sqrt(static_cast<double>(o[lower]));
        o[lower] -= 1;
      }
      if (raise >= 0) {
        if (o[raise] + 1 >= dims[raise]) continue;
        o[raise] += 1;
        amp *= std::sqrt(static_cast<double>(o[raise]));
      }
      m(index(o), i) += coef * amp;
    }
  };
  constexpr int a1 = 0, b1 = 1, a2 = 2, b2 = 3;
  const cplx half_i(0.0, 0.5);
  const double k12 = std::sqrt(r.kex1 * r.kex2);
  // H = -g1 (a1^dag b1 + a1 b1^dag) - g2 (a2^dag b2 + a2 b2^dag)
  //     + (i/2) sqrt(k1 k2) (a1^dag a2 - a1 a2^dag)
  add(net.H, -r.g1, a1, b1);
  add(net.H, -r.g1, b1, a1);
  add(net.H, -r.g2, a2, b2);
  add(net.H, -r.g2, b2, a2);
  add(net.H, half_i * k12, a1, a2);
  add(net.H, -half_i * k12, a2, a1);
  add(net.L[0], std::sqrt(r.ki1), -1, a1);
  add(net.L[1], std::sqrt(r.gi1), -1, b1);
  add(net.L[2], std::sqrt(r.kex1), -1, a1);
  add(net.L[2], std::sqrt(r.kex2), -1, a2);
  add(net.L[3], std::sqrt(r.ki2), -1, a2);
  add(net.L[4], std::sqrt(r.gi2), -1, b2);
  return net;
}

}  // namespace golden
