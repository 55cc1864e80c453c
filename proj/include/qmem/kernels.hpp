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

// Vector kernels used by the master-equation integrator. Each kernel has a
// scalar reference and, on x86-64, an AVX2+FMA variant selected at runtime.
// QMEM_SIMD=scalar forces the reference path.

#include <complex>
#include <cstddef>
#include <string>

namespace qmem::kernels {

using cplx = std::complex<double>;

enum class Isa { Scalar, Avx2 };

std::string to_string(Isa isa);

/// True when the build has the AVX2 variant and the CPU supports AVX2 and FMA.
bool avx2_available();

/// Variant used by the dispatching kernels; resolved once per process.
Isa active_isa();

namespace scalar {
/// y += a * x
void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y);
/// y += a * x
void axpy(std::size_t n, double a, const double* x, double* y);
/// out = y + a * x
void axpy_into(std::size_t n, double a, const double* x, const double* y, double* out);
}  // namespace scalar

#if defined(QMEM_HAVE_AVX2)
namespace avx2 {
void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void axpy(std::size_t n, double a, const double* x, double* y);
void axpy_into(std::size_t n, double a, const double* x, const double* y, double* out);
}  // namespace avx2
#endif

void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y);
void axpy(std::size_t n, double a, const double* x, double* y);
void axpy_into(std::size_t n, double a, const double* x, const double* y, double* out);

}  // namespace qmem::kernels
