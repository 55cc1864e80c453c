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

#include "qmem/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qmem/errors.hpp"
#include "qmem/kernels.hpp"

namespace qmem {

std::size_t TruncationSpec::total_dim() const {
  std::size_t n = 1;
  for (int d : dims()) n *= static_cast<std::size_t>(std::max(d, 0));
  return n;
}

void TruncationSpec::validate() const {
  for (int d : dims()) {
    if (d < 2) throw InvalidDimension("truncation dims must be >= 2, got " + std::to_string(d));
  }
  if (total_dim() > kMaxTotalDim) {
    throw InvalidDimension("total dimension " + std::to_string(total_dim()) + " exceeds " +
                           std::to_string(kMaxTotalDim));
  }
}

OperatorMatrix OpenSystem::hamiltonian(double g1, double g2) const {
  return h_static + cplx(g1) * h_g1 + cplx(g2) * h_g2;
}

OpenSystem build_system(const SystemParams& params, const TruncationSpec& trunc) {
  params.validate();
  trunc.validate();
  const ModeSpace space = ModeSpace::transfer(trunc.a1, trunc.b1, trunc.a2, trunc.b2);
  auto composite = [&](double g1, double g2) {
    return series_compose(block_triple(params.block1, g1, 1, space), block_triple(params.block2, g2, 2, space),
                          kExtrinsicPort);
  };
  SLHTriple base = composite(0.0, 0.0);
  OperatorMatrix h1 = composite(1.0, 0.0).H - base.H;
  OperatorMatrix h2 = composite(0.0, 1.0).H - base.H;
  return {space, base.H, std::move(h1), std::move(h2), std::move(base.L)};
}

DensityMatrix DensityMatrix::pure(const ModeSpace& space, const CVector& psi) {
  if (static_cast<std::size_t>(psi.size()) != space.total_dim()) {
    throw DimensionMismatch("state vector size does not match the mode space");
  }
  return {space, psi * psi.adjoint()};
}

double DensityMatrix::hermiticity_error() const { return (entries - entries.adjoint()).cwiseAbs().maxCoeff(); }

double DensityMatrix::min_eigenvalue() const {
  const CMatrix h = 0.5 * (entries + entries.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

void DensityMatrix::validate() const {
  if (static_cast<std::size_t>(entries.rows()) != space.total_dim() || entries.rows() != entries.cols()) {
    throw DimensionMismatch("density matrix shape does not match the mode space");
  }
  if (hermiticity_error() > 1e-10) throw InvalidParameter("density matrix is not Hermitian");
  if (std::abs(trace() - 1.0) > 1e-9) throw InvalidParameter("density matrix trace differs from 1");
  if (min_eigenvalue() < -1e-9) throw InvalidParameter("density matrix has a negative eigenvalue");
}

void QubitInput::validate() const {
  const double n = std::norm(c_g) + std::norm(c_e);
  if (std::abs(n - 1.0) > 1e-12) throw InvalidParameter("qubit amplitudes are not normalized");
}

DensityMatrix initial_state(const ModeSpace& space, const QubitInput& input) {
  input.validate();
  CVector psi = input.c_g * basis_state(space, {0, 0, 0, 0}) + input.c_e * basis_state(space, {0, 1, 0, 0});
  return DensityMatrix::pure(space, psi);
}

CVector target_state(const ModeSpace& space, const QubitInput& input, cplx phase) {
  input.validate();
  return input.c_g * basis_state(space, {0, 0, 0, 0}) + phase * input.c_e * basis_state(space, {0, 0, 0, 1});
}

namespace {

// Compressed rows of a sparse operator; `vals` may hold several value sets
// on one pattern.
struct Csr {
  std::size_t n = 0;
  std::vector<std::size_t> row_ptr;
  std::vector<std::size_t> col;
  std::vector<std::vector<cplx>> vals;
};

Csr pattern_of(const std::vector<const CMatrix*>& mats) {
  Csr m;
  m.n = static_cast<std::size_t>(mats.front()->rows());
  m.vals.resize(mats.size());
  m.row_ptr.push_back(0);
  for (std::size_t r = 0; r < m.n; ++r) {
    for (std::size_t c = 0; c < m.n; ++c) {
      const auto ri = static_cast<Eigen::Index>(r);
      const auto ci = static_cast<Eigen::Index>(c);
      const bool nz = std::any_of(mats.begin(), mats.end(), [&](const CMatrix* x) { return (*x)(ri, ci) != 0.0; });
      if (!nz) continue;
      m.col.push_back(c);
      for (std::size_t k = 0; k < mats.size(); ++k) m.vals[k].push_back((*mats[k])(ri, ci));
    }
    m.row_ptr.push_back(m.col.size());
  }
  return m;
}

// out += scale * A * x for row-major n x n buffers.
void sparse_times_dense(const Csr& a, const std::vector<cplx>& v, cplx scale, const cplx* x, cplx* out) {
  const std::size_t n = a.n;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = a.row_ptr[r]; k < a.row_ptr[r + 1]; ++k) {
      kernels::caxpy(n, scale * v[k], x + a.col[k] * n, out + r * n);
    }
  }
}

void adjoint_into(std::size_t n, const cplx* x, cplx* out) {
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[c * n + r] = std::conj(x[r * n + c]);
  }
}

class Integrator {
 public:
  explicit Integrator(const OpenSystem& sys) : n_(sys.space.total_dim()) {
    OperatorMatrix decay = OperatorMatrix::zero(sys.space);
    for (const auto& l : sys.lindblad) decay += l.adjoint() * l;
    const CMatrix h_eff0 = sys.h_static.entries() - cplx(0.0, 0.5) * decay.entries();
    heff_ = pattern_of({&h_eff0, &sys.h_g1.entries(), &sys.h_g2.entries()});
    heff_now_.resize(heff_.col.size());
    for (const auto& l : sys.lindblad) {
      if (l.max_abs() == 0.0) continue;
      lind_.push_back(pattern_of({&l.entries()}));
    }
    const std::size_t nn = n_ * n_;
    for (auto* b : {&k1_, &k2_, &k3_, &k4_, &tmp_, &adj_, &a_, &b_, &t_}) b->assign(nn, cplx{});
  }

  std::size_t dim() const { return n_; }

  void step(std::vector<cplx>& rho, double t, double h, const ControlProfile& ctl) {
    const auto g0 = ctl.at(t);
    const auto gm = ctl.at(t + 0.5 * h);
    const auto g1 = ctl.at(t + h);
    const std::size_t m = 2 * n_ * n_;
    auto* r = reinterpret_cast<double*>(rho.data());
    auto* tmp = reinterpret_cast<double*>(tmp_.data());
    rhs(rho, g0, k1_);
    kernels::axpy_into(m, 0.5 * h, reinterpret_cast<double*>(k1_.data()), r, tmp);
    rhs(tmp_, gm, k2_);
    kernels::axpy_into(m, 0.5 * h, reinterpret_cast<double*>(k2_.data()), r, tmp);
    rhs(tmp_, gm, k3_);
    kernels::axpy_into(m, h, reinterpret_cast<double*>(k3_.data()), r, tmp);
    rhs(tmp_, g1, k4_);
    kernels::axpy(m, h / 6.0, reinterpret_cast<double*>(k1_.data()), r);
    kernels::axpy(m, h / 3.0, reinterpret_cast<double*>(k2_.data()), r);
    kernels::axpy(m, h / 3.0, reinterpret_cast<double*>(k3_.data()), r);
    kernels::axpy(m, h / 6.0, reinterpret_cast<double*>(k4_.data()), r);
  }

 private:
  // out = A + B^dag + sum_k L_k (L_k rho^dag)^dag with A = -i Heff rho and
  // B = -i Heff rho^dag; no Hermiticity of rho is assumed.
  void rhs(const std::vector<cplx>& rho, std::pair<double, double> g, std::vector<cplx>& out) {
    const auto& v = heff_.vals;
    for (std::size_t k = 0; k < heff_now_.size(); ++k) {
      heff_now_[k] = v[0][k] + g.first * v[1][k] + g.second * v[2][k];
    }
    const cplx minus_i{0.0, -1.0};
    const std::size_t nn = n_ * n_;
    adjoint_into(n_, rho.data(), adj_.data());
    std::fill(out.begin(), out.end(), cplx{});
    std::fill(b_.begin(), b_.end(), cplx{});
    sparse_times_dense(heff_, heff_now_, minus_i, rho.data(), out.data());
    sparse_times_dense(heff_, heff_now_, minus_i, adj_.data(), b_.data());
    for (const auto& l : lind_) {
      std::fill(t_.begin(), t_.end(), cplx{});
      sparse_times_dense(l, l.vals[0], 1.0, adj_.data(), t_.data());
      adjoint_into(n_, t_.data(), a_.data());
      sparse_times_dense(l, l.vals[0], 1.0, a_.data(), out.data());
    }
    adjoint_into(n_, b_.data(), a_.data());
    kernels::axpy(2 * nn, 1.0, reinterpret_cast<const double*>(a_.data()), reinterpret_cast<double*>(out.data()));
  }

  std::size_t n_;
  Csr heff_;
  std::vector<cplx> heff_now_;
  std::vector<Csr> lind_;
  std::vector<cplx> k1_, k2_, k3_, k4_, tmp_, adj_, a_, b_, t_;
};

std::vector<cplx> to_row_major(const CMatrix& m) {
  const auto n = static_cast<std::size_t>(m.rows());
  std::vector<cplx> out(n * n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) out[r * n + c] = m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  return out;
}

CMatrix from_row_major(const std::vector<cplx>& v, std::size_t n) {
  CMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = v[r * n + c];
  }
  return m;
}

}  // namespace

MasterResult evolve_master(const OpenSystem& system, const DensityMatrix& rho0, const ControlProfile& controls,
                           std::span<const double> grid, const EvolveOptions& opts) {
  if (!(rho0.space == system.space)) throw DimensionMismatch("initial state lives on a different mode space");
  rho0.validate();
  controls.validate();
  if (grid.size() < 2) throw InvalidParameter("evolve_master: grid needs at least two nodes");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) throw InvalidParameter("evolve_master: grid is not ascending");
  }

  Integrator integ(system);
  const std::size_t n = integ.dim();
  std::vector<cplx> rho = to_row_major(rho0.entries);
  const double tr0 = rho0.trace().real();

  MasterResult res{{}, {}, rho0, 0.0, rho0.hermiticity_error(), rho0.min_eigenvalue(), 0};

  auto record = [&](double t, const DensityMatrix& d) {
    res.time.push_back(t);
    if (opts.keep_states) res.states.push_back(d);
    if (opts.observer) opts.observer(t, d);
  };
  record(grid.front(), rho0);

  const std::size_t steps = grid.size() - 1;
  for (std::size_t k = 0; k < steps; ++k) {
    integ.step(rho, grid[k], grid[k + 1] - grid[k], controls);
    cplx tr{};
    for (std::size_t i = 0; i < n; ++i) tr += rho[i * n + i];
    const double drift = std::max(std::abs(tr.real() - tr0), std::abs(tr.imag()));
    res.max_trace_drift = std::max(res.max_trace_drift, drift);
    if (drift > kMaxTraceDrift) {
      throw StepSizeError("trace drifted by " + std::to_string(drift) + " at t = " + std::to_string(grid[k + 1]) +
                          "; reduce the oracle step");
    }
    const bool last = k + 1 == steps;
    const bool check = last || (opts.check_stride > 0 && (k + 1) % opts.check_stride == 0);
    const bool rec = last || (opts.record_stride > 0 && (k + 1) % opts.record_stride == 0);
    if (check || rec) {
      DensityMatrix d{system.space, from_row_major(rho, n)};
      if (check) {
        res.max_hermiticity_error = std::max(res.max_hermiticity_error, d.hermiticity_error());
        res.min_eigenvalue = std::min(res.min_eigenvalue, d.min_eigenvalue());
      }
      if (rec) record(grid[k + 1], d);
      if (last) res.final_state = std::move(d);
    }
  }
  res.steps = steps;
  return res;
}

double default_oracle_step(const SystemParams& params) { return 4.0 * default_profile_step(params); }

std::vector<double> fock_populations(const DensityMatrix& rho, std::string_view label) {
  const ModeSpace& s = rho.space;
  const std::size_t m = s.index_of(label);
  std::size_t stride = 1;
  for (std::size_t k = m + 1; k < s.num_modes(); ++k) stride *= static_cast<std::size_t>(s.dims()[k]);
  const auto dim = static_cast<std::size_t>(s.dims()[m]);
  std::vector<double> p(dim, 0.0);
  for (std::size_t i = 0; i < s.total_dim(); ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    p[(i / stride) % dim] += rho.entries(ii, ii).real();
  }
  return p;
}

cplx expectation(const DensityMatrix& rho, const OperatorMatrix& op) {
  if (!(op.space() == rho.space)) throw DimensionMismatch("operator and state live on different spaces");
  return (rho.entries * op.entries()).trace();
}

double multi_excitation_population(const DensityMatrix& rho) {
  double p = 0.0;
  for (std::size_t i = 0; i < rho.space.total_dim(); ++i) {
    const auto occ = rho.space.occupations(i);
    int total = 0;
    for (int o : occ) total += o;
    if (total > 1) p += rho.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real();
  }
  return p;
}

double transfer_fidelity(const DensityMatrix& rho, const QubitInput& input, cplx phase) {
  const CVector psi = target_state(rho.space, input, phase);
  const double f = (psi.adjoint() * rho.entries * psi)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

}  // namespace qmem
