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

#include <cstdlib>
#include <random>
#include <vector>

#include "qmem/kernels.hpp"

using namespace qmem::kernels;

namespace {

std::vector<double> random_doubles(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

std::vector<cplx> random_complex(std::size_t n, unsigned seed) {
  const auto re = random_doubles(2 * n, seed);
  std::vector<cplx> v(n);
  for (std::size_t k = 0; k < n; ++k) v[k] = {re[2 * k], re[2 * k + 1]};
  return v;
}

const std::size_t kLengths[] = {0, 1, 2, 3, 4, 5, 7, 8, 13, 64, 101};

}  // namespace

TEST_CASE("scalar kernels") {
  std::vector<cplx> x{{1.0, 2.0}, {-0.5, 0.25}};
  std::vector<cplx> y{{0.0, 1.0}, {3.0, 0.0}};
  scalar::caxpy(2, {0.0, 1.0}, x.data(), y.data());
  CHECK(y[0] == cplx(-2.0, 2.0));
  CHECK(y[1] == cplx(2.75, -0.5));

  std::vector<double> a{1.0, 2.0, 3.0};
  std::vector<double> b{0.5, 0.5, 0.5};
  std::vector<double> out(3);
  scalar::axpy_into(3, 2.0, a.data(), b.data(), out.data());
  CHECK(out == std::vector<double>{2.5, 4.5, 6.5});
  scalar::axpy(3, -1.0, a.data(), b.data());
  CHECK(b == std::vector<double>{-0.5, -1.5, -2.5});
}

TEST_CASE("dispatch") {
  const Isa isa = active_isa();
  CHECK(active_isa() == isa);
  const char* forced = std::getenv("QMEM_SIMD");
  if (forced != nullptr && std::string(forced) == "scalar") {
    CHECK(isa == Isa::Scalar);
  } else {
    CHECK((isa == Isa::Avx2) == avx2_available());
  }
  CHECK(to_string(Isa::Scalar) == "scalar");
  CHECK(to_string(Isa::Avx2) == "avx2");
}

TEST_CASE("dispatched kernels agree with the scalar reference") {
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto x = random_complex(n, 1);
    auto y_ref = random_complex(n, 2);
    auto y = y_ref;
    const cplx a{0.3, -1.7};
    scalar::caxpy(n, a, x.data(), y_ref.data());
    caxpy(n, a, x.data(), y.data());
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(y[k] - y_ref[k]) <= 1e-15 * (1.0 + std::abs(y_ref[k])));
    }

    const auto u = random_doubles(n, 3);
    const auto v = random_doubles(n, 4);
    std::vector<double> r_ref(n);
    std::vector<double> r(n);
    scalar::axpy_into(n, 0.125, u.data(), v.data(), r_ref.data());
    axpy_into(n, 0.125, u.data(), v.data(), r.data());
    for (std::size_t k = 0; k < n; ++k) CHECK(r[k] == doctest::Approx(r_ref[k]).epsilon(1e-15));
    auto w_ref = v;
    auto w = v;
    scalar::axpy(n, -2.5, u.data(), w_ref.data());
    axpy(n, -2.5, u.data(), w.data());
    for (std::size_t k = 0; k < n; ++k) CHECK(w[k] == doctest::Approx(w_ref[k]).epsilon(1e-15));
  }
}

#if defined(QMEM_HAVE_AVX2)
TEST_CASE("avx2 kernels agree with the scalar reference") {
  if (!avx2_available()) return;
  for (std::size_t n : kLengths) {
    CAPTURE(n);
    const auto x = random_complex(n, 5);
    auto y_ref = random_complex(n, 6);
    auto y = y_ref;
    const cplx a{-0.75, 0.5};
    scalar::caxpy(n, a, x.data(), y_ref.data());
    avx2::caxpy(n, a, x.data(), y.data());
    for (std::size_t k = 0; k < n; ++k) {
      CHECK(std::abs(y[k] - y_ref[k]) <= 1e-15 * (1.0 + std::abs(y_ref[k])));
    }
    const auto u = random_doubles(n, 7);
    auto w_ref = random_doubles(n, 8);
    auto w = w_ref;
    scalar::axpy(n, 1.5, u.data(), w_ref.data());
    avx2::axpy(n, 1.5, u.data(), w.data());
    for (std::size_t k = 0; k < n; ++k) CHECK(w[k] == doctest::Approx(w_ref[k]).epsilon(1e-15));
  }
}
#endif
