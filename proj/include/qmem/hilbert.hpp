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

// Dense operator algebra over tensor products of truncated Fock spaces.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace qmem {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kDefaultTol = 1e-12;

/// Ordered set of labeled modes with per-mode truncation. The first label is
/// the most significant factor of the Kronecker product.
class ModeSpace {
 public:
  ModeSpace(std::vector<int> dims, std::vector<std::string> labels);

  /// The four-mode space of a two-block transfer, ordered (a1, b1, a2, b2).
  static ModeSpace transfer(int a1, int b1, int a2, int b2);

  const std::vector<int>& dims() const noexcept { return dims_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::size_t num_modes() const noexcept { return dims_.size(); }
  std::size_t total_dim() const noexcept { return total_; }

  bool contains(std::string_view label) const noexcept;
  std::size_t index_of(std::string_view label) const;
  int dim_of(std::string_view label) const { return dims_[index_of(label)]; }

  /// Flat basis index of the product state with the given per-mode occupations.
  std::size_t basis_index(const std::vector<int>& occupations) const;
  /// Inverse of basis_index.
  std::vector<int> occupations(std::size_t index) const;

  friend bool operator==(const ModeSpace&, const ModeSpace&) = default;

 private:
  std::vector<int> dims_;
  std::vector<std::string> labels_;
  std::size_t total_ = 1;
};

/// Square complex matrix acting on a ModeSpace.
class OperatorMatrix {
 public:
  OperatorMatrix(ModeSpace space, CMatrix entries);

  static OperatorMatrix zero(const ModeSpace& space);
  static OperatorMatrix identity(const ModeSpace& space);

  const ModeSpace& space() const noexcept { return space_; }
  const CMatrix& entries() const noexcept { return entries_; }
  std::size_t dim() const noexcept { return space_.total_dim(); }
  cplx operator()(std::size_t r, std::size_t c) const { return entries_(r, c); }

  OperatorMatrix adjoint() const;
  bool is_hermitian(double tol = kDefaultTol) const;
  bool approx_equal(const OperatorMatrix& other, double tol = kDefaultTol) const;
  /// Largest elementwise modulus.
  double max_abs() const;

  OperatorMatrix& operator+=(const OperatorMatrix& rhs);
  OperatorMatrix& operator-=(const OperatorMatrix& rhs);
  OperatorMatrix& operator*=(cplx s);

  friend OperatorMatrix operator+(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs += rhs; }
  friend OperatorMatrix operator-(OperatorMatrix lhs, const OperatorMatrix& rhs) { return lhs -= rhs; }
  friend OperatorMatrix operator*(OperatorMatrix lhs, cplx s) { return lhs *= s; }
  friend OperatorMatrix operator*(cplx s, OperatorMatrix rhs) { return rhs *= s; }
  friend OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs);

 private:
  void require_same_space(const OperatorMatrix& other) const;

  ModeSpace space_;
  CMatrix entries_;
};

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y);

/// Single-mode lowering operator: entries (n, n+1) = sqrt(n+1).
OperatorMatrix annihilator(int dim);
/// Single-mode identity.
OperatorMatrix single_identity(int dim);

/// Lift a single-mode operator onto `label` of `space`.
OperatorMatrix embed(const OperatorMatrix& op, std::string_view label, const ModeSpace& space);

/// Lowering operator of `label`, already embedded in `space`.
OperatorMatrix mode_annihilator(std::string_view label, const ModeSpace& space);

CMatrix kron(const CMatrix& a, const CMatrix& b);

/// Product basis vector with the given occupations.
CVector basis_state(const ModeSpace& space, const std::vector<int>& occupations);

}  // namespace qmem
