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

#include <cstdlib>
#include <string_view>

#include "qmem/kernels.hpp"

namespace qmem::kernels {

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(QMEM_HAVE_AVX2)
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  static const Isa isa = [] {
    const char* env = std::getenv("QMEM_SIMD");
    if (env != nullptr && std::string_view(env) == "scalar") return Isa::Scalar;
    return avx2_available() ? Isa::Avx2 : Isa::Scalar;
  }();
  return isa;
}

void caxpy(std::size_t n, cplx a, const cplx* x, cplx* y) {
#if defined(QMEM_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::caxpy(n, a, x, y);
#endif
  scalar::caxpy(n, a, x, y);
}

void axpy(std::size_t n, double a, const double* x, double* y) {
#if defined(QMEM_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::axpy(n, a, x, y);
#endif
  scalar::axpy(n, a, x, y);
}

void axpy_into(std::size_t n, double a, const double* x, const double* y, double* out) {
#if defined(QMEM_HAVE_AVX2)
  if (active_isa() == Isa::Avx2) return avx2::axpy_into(n, a, x, y, out);
#endif
  scalar::axpy_into(n, a, x, y, out);
}

}  // namespace qmem::kernels
