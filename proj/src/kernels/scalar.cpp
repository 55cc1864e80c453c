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

#include "qmem/kernels.hpp"

namespace qmem::kernels::scalar {

void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
  const double ar = a.real();
  const double ai = a.imag();
  for (std::size_t k = 0; k < n; ++k) {
    const double xr = x[k].real();
    const double xi = x[k].imag();
    y[k] = {y[k].real() + (ar * xr - ai * xi), y[k].imag() + (ar * xi + ai * xr)};
  }
}

void axpy(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void axpy_into(std::size_t n, double a, const double* x, const double* y, double* out) {
  for (std::size_t k = 0; k < n; ++k) out[k] = y[k] + a * x[k];
}

}  // namespace qmem::kernels::scalar
