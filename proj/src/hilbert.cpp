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

#include "qmem/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qmem/errors.hpp"

namespace qmem {

ModeSpace::ModeSpace(std::vector<int> dims, std::vector<std::string> labels)
    : dims_(std::move(dims)), labels_(std::move(labels)) {
  if (dims_.empty()) throw InvalidDimension("mode space needs at least one mode");
  if (dims_.size() != labels_.size()) {
    throw DimensionMismatch("mode space has " + std::to_string(dims_.size()) + " dims but " +
                            std::to_string(labels_.size()) + " labels");
  }
  std::set<std::string> seen;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (dims_[k] < 2) {
      throw InvalidDimension("mode '" + labels_[k] + "' has truncation " + std::to_string(dims_[k]) +
                             " (< 2)");
    }
    if (!seen.insert(labels_[k]).second) throw InvalidDimension("duplicate mode label '" + labels_[k] + "'");
    total_ *= static_cast<std::size_t>(dims_[k]);
  }
}

ModeSpace ModeSpace::transfer(int a1, int b1, int a2, int b2) {
  return ModeSpace({a1, b1, a2, b2}, {"a1", "b1", "a2", "b2"});
}

bool ModeSpace::contains(std::string_view label) const noexcept {
  return std::find(labels_.begin(), labels_.end(), label) != labels_.end();
}

std::size_t ModeSpace::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) throw UnknownLabel("no mode labeled '" + std::string(label) + "'");
  return static_cast<std::size_t>(it - labels_.begin());
}

std::size_t ModeSpace::basis_index(const std::vector<int>& occupations) const {
  if (occupations.size() != dims_.size()) throw DimensionMismatch("occupation vector has wrong length");
  std::size_t idx = 0;
  for (std::size_t k = 0; k < dims_.size(); ++k) {
    if (occupations[k] < 0 || occupations[k] >= dims_[k]) {
      throw InvalidDimension("occupation " + std::to_string(occupations[k]) + " outside truncation of '" +
                             labels_[k] + "'");
    }
    idx = idx * static_cast<std::size_t>(dims_[k]) + static_cast<std::size_t>(occupations[k]);
  }
  return idx;
}

std::vector<int> ModeSpace::occupations(std::size_t index) const {
  std::vector<int> occ(dims_.size());
  for (std::size_t k = dims_.size(); k-- > 0;) {
    occ[k] = static_cast<int>(index % static_cast<std::size_t>(dims_[k]));
    index /= static_cast<std::size_t>(dims_[k]);
  }
  return occ;
}

OperatorMatrix::OperatorMatrix(ModeSpace space, CMatrix entries)
    : space_(std::move(space)), entries_(std::move(entries)) {
  const auto n = static_cast<Eigen::Index>(space_.total_dim());
  if (entries_.rows() != n || entries_.cols() != n) {
    throw DimensionMismatch("operator is " + std::to_string(entries_.rows()) + "x" +
                            std::to_string(entries_.cols()) + " but space dimension is " + std::to_string(n));
  }
}

OperatorMatrix OperatorMatrix::zero(const ModeSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.total_dim());
  return {space, CMatrix::Zero(n, n)};
}

OperatorMatrix OperatorMatrix::identity(const ModeSpace& space) {
  const auto n = static_cast<Eigen::Index>(space.total_dim());
  return {space, CMatrix::Identity(n, n)};
}

OperatorMatrix OperatorMatrix::adjoint() const { return {space_, entries_.adjoint()}; }

bool OperatorMatrix::is_hermitian(double tol) const {
  return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool OperatorMatrix::approx_equal(const OperatorMatrix& other, double tol) const {
  if (!(space_ == other.space_)) return false;
  return (entries_ - other.entries_).cwiseAbs().maxCoeff() <= tol;
}

double OperatorMatrix::max_abs() const { return entries_.cwiseAbs().maxCoeff(); }

void OperatorMatrix::require_same_space(const OperatorMatrix& other) const {
  if (!(space_ == other.space_)) throw DimensionMismatch("operators act on different mode spaces");
}

OperatorMatrix& OperatorMatrix::operator+=(const OperatorMatrix& rhs) {
  require_same_space(rhs);
  entries_ += rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator-=(const OperatorMatrix& rhs) {
  require_same_space(rhs);
  entries_ -= rhs.entries_;
  return *this;
}

OperatorMatrix& OperatorMatrix::operator*=(cplx s) {
  entries_ *= s;
  return *this;
}

OperatorMatrix operator*(const OperatorMatrix& lhs, const OperatorMatrix& rhs) {
  lhs.require_same_space(rhs);
  return {lhs.space_, lhs.entries_ * rhs.entries_};
}

OperatorMatrix commutator(const OperatorMatrix& x, const OperatorMatrix& y) { return x * y - y * x; }

namespace {

ModeSpace single_space(int dim) { return ModeSpace({dim}, {"mode"}); }

}  // namespace

OperatorMatrix annihilator(int dim) {
  if (dim < 2) throw InvalidDimension("annihilator needs dim >= 2, got " + std::to_string(dim));
  CMatrix m = CMatrix::Zero(dim, dim);
  for (int n = 0; n + 1 < dim; ++n) m(n, n + 1) = std::sqrt(static_cast<double>(n + 1));
  return {single_space(dim), std::move(m)};
}

OperatorMatrix single_identity(int dim) {
  if (dim < 2) throw InvalidDimension("identity needs dim >= 2, got " + std::to_string(dim));
  return OperatorMatrix::identity(single_space(dim));
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

OperatorMatrix embed(const OperatorMatrix& op, std::string_view label, const ModeSpace& space) {
  if (op.space().num_modes() != 1) throw DimensionMismatch("embed expects a single-mode operator");
  const std::size_t target = space.index_of(label);
  if (space.dims()[target] != static_cast<int>(op.dim())) {
    throw DimensionMismatch("operator dimension " + std::to_string(op.dim()) + " does not match truncation " +
                            std::to_string(space.dims()[target]) + " of mode '" + std::string(label) + "'");
  }
  CMatrix acc = CMatrix::Identity(1, 1);
  for (std::size_t k = 0; k < space.num_modes(); ++k) {
    const CMatrix factor = k == target ? op.entries() : CMatrix::Identity(space.dims()[k], space.dims()[k]);
    acc = kron(acc, factor);
  }
  return {space, std::move(acc)};
}

OperatorMatrix mode_annihilator(std::string_view label, const ModeSpace& space) {
  return embed(annihilator(space.dim_of(label)), label, space);
}

CVector basis_state(const ModeSpace& space, const std::vector<int>& occupations) {
  CVector v = CVector::Zero(static_cast<Eigen::Index>(space.total_dim()));
  v(static_cast<Eigen::Index>(space.basis_index(occupations))) = 1.0;
  return v;
}

}  // namespace qmem
