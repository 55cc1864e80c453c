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

#include "qmem/slh.hpp"

#include <cmath>
#include <string>

#include "qmem/errors.hpp"

namespace qmem {

void BlockParams::validate() const {
  if (!(kappa_ex > 0.0) || !std::isfinite(kappa_ex)) {
    throw InvalidParameter("kappa_ex must be positive and finite");
  }
  if (!(kappa_i >= 0.0) || !std::isfinite(kappa_i)) throw InvalidParameter("kappa_i must be >= 0");
  if (!(gamma_i >= 0.0) || !std::isfinite(gamma_i)) throw InvalidParameter("gamma_i must be >= 0");
}

void SLHTriple::validate(double tol) const {
  const auto n = static_cast<Eigen::Index>(L.size());
  if (S.rows() != n || S.cols() != n) throw DimensionMismatch("S dimension does not match number of ports");
  if ((S * S.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > tol) {
    throw InvalidParameter("scattering matrix is not unitary");
  }
  for (const auto& l : L) {
    if (!(l.space() == H.space())) throw DimensionMismatch("Lindblad operator on a different mode space");
  }
  if (!H.is_hermitian(tol)) throw InvalidParameter("Hamiltonian is not Hermitian");
}

SLHTriple block_triple(const BlockParams& params, double g, int block, const ModeSpace& space) {
  if (block != 1 && block != 2) throw InvalidParameter("block index must be 1 or 2");
  params.validate();
  const std::string tag = std::to_string(block);
  const OperatorMatrix a = mode_annihilator("a" + tag, space);
  const OperatorMatrix b = mode_annihilator("b" + tag, space);
  const OperatorMatrix ad = a.adjoint();
  const OperatorMatrix bd = b.adjoint();

  OperatorMatrix h = cplx(-g) * (ad * b + a * bd);
  std::vector<OperatorMatrix> ls{cplx(std::sqrt(params.kappa_ex)) * a, cplx(std::sqrt(params.kappa_i)) * a,
                                 cplx(std::sqrt(params.gamma_i)) * b};
  return {CMatrix::Identity(3, 3), std::move(ls), std::move(h)};
}

SLHTriple series_compose(const SLHTriple& upstream, const SLHTriple& downstream, std::size_t port) {
  if (!(upstream.space() == downstream.space())) throw DimensionMismatch("series_compose: mismatched spaces");
  if (port >= upstream.num_ports() || port >= downstream.num_ports()) {
    throw InvalidParameter("series_compose: port " + std::to_string(port) + " out of range");
  }
  // The connected port must not scatter into other ports on either side.
  auto isolated = [port](const CMatrix& s) {
    for (Eigen::Index k = 0; k < s.rows(); ++k) {
      if (k == static_cast<Eigen::Index>(port)) continue;
      if (std::abs(s(k, port)) > kDefaultTol || std::abs(s(port, k)) > kDefaultTol) return false;
    }
    return true;
  };
  if (!isolated(upstream.S) || !isolated(downstream.S)) {
    throw InvalidParameter("series_compose: connected port mixes with other ports");
  }

  const auto p = static_cast<Eigen::Index>(port);
  const cplx s_down = downstream.S(p, p);
  const OperatorMatrix& l_up = upstream.L[port];
  const OperatorMatrix& l_down = downstream.L[port];

  OperatorMatrix coupling = l_down.adjoint() * (s_down * l_up);
  OperatorMatrix h = upstream.H + downstream.H + cplx(0.0, -0.5) * (coupling - coupling.adjoint());

  std::vector<OperatorMatrix> ls;
  std::vector<std::pair<const CMatrix*, Eigen::Index>> origin;
  ls.reserve(upstream.num_ports() + downstream.num_ports() - 1);
  for (std::size_t k = 0; k < upstream.num_ports(); ++k) {
    if (k == port) continue;
    ls.push_back(upstream.L[k]);
    origin.emplace_back(&upstream.S, static_cast<Eigen::Index>(k));
  }
  const std::size_t connected = ls.size();
  ls.push_back(l_down + s_down * l_up);
  origin.emplace_back(nullptr, 0);
  for (std::size_t k = 0; k < downstream.num_ports(); ++k) {
    if (k == port) continue;
    ls.push_back(downstream.L[k]);
    origin.emplace_back(&downstream.S, static_cast<Eigen::Index>(k));
  }

  // Unconnected ports keep their own S sub-blocks; cross terms between the
  // two components vanish because their fields never meet.
  const auto n = static_cast<Eigen::Index>(ls.size());
  CMatrix s = CMatrix::Zero(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    for (Eigen::Index c = 0; c < n; ++c) {
      const auto& [mr, ir] = origin[static_cast<std::size_t>(r)];
      const auto& [mc, ic] = origin[static_cast<std::size_t>(c)];
      if (mr != nullptr && mr == mc) s(r, c) = (*mr)(ir, ic);
    }
  }
  const auto cidx = static_cast<Eigen::Index>(connected);
  s(cidx, cidx) = s_down * upstream.S(p, p);

  return {std::move(s), std::move(ls), std::move(h)};
}

OperatorMatrix effective_hamiltonian(const SLHTriple& triple, const std::vector<std::size_t>& ports) {
  OperatorMatrix h = triple.H;
  for (std::size_t port : ports) {
    if (port >= triple.num_ports()) {
      throw InvalidParameter("effective_hamiltonian: port " + std::to_string(port) + " out of range");
    }
    const OperatorMatrix& l = triple.L[port];
    h -= cplx(0.0, 0.5) * (l.adjoint() * l);
  }
  return h;
}

std::vector<std::size_t> all_ports(const SLHTriple& triple) {
  std::vector<std::size_t> ports(triple.num_ports());
  for (std::size_t k = 0; k < ports.size(); ++k) ports[k] = k;
  return ports;
}

}  // namespace qmem
