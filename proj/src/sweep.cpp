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

#include "qmem/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "qmem/errors.hpp"

namespace qmem {

void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& fn) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < count; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > lo) || n < 2) throw InvalidParameter("log_space needs 0 < lo < hi and n >= 2");
  std::vector<double> v(n);
  const double a = std::log10(lo);
  const double b = std::log10(hi);
  for (std::size_t k = 0; k < n; ++k) v[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / (n - 1));
  v.front() = lo;
  v.back() = hi;
  return v;
}

namespace {

void require_monotone(std::span<const double> g, const char* what) {
  for (std::size_t k = 1; k < g.size(); ++k) {
    if (!(g[k] > g[k - 1])) throw InvalidParameter(std::string(what) + " grid must be strictly increasing");
  }
}

struct PointOutcome {
  std::optional<double> fidelity;
  std::optional<double> oracle;
  std::string note;
};

PointOutcome evaluate_point(const SystemParams& p, bool with_oracle, const SweepOptions& opts) {
  PointOutcome out;
  try {
    const double g1 = opts.g_scale * p.block1.kappa_ex;
    const double g2 = opts.g_scale * p.block2.kappa_ex;
    const OptimizedMidpoint best = optimize_midpoint(p, g1, g2, opts.grid.window);
    out.fidelity = std::clamp(best.fidelity, 0.0, 1.0);
    if (with_oracle) {
      const OracleRun run = run_oracle(best.mid, p, QubitInput{0.0, 1.0}, opts.oracle_truncation, opts.grid);
      out.oracle = run.fidelity;
    }
  } catch (const InfeasiblePoint& e) {
    out.note = std::string("infeasible: ") + e.what();
  } catch (const Error& e) {
    out.note = std::string("failed: ") + e.what();
  }
  return out;
}

void run_points(SweepResult& r, const std::vector<SystemParams>& points, const SweepOptions& opts) {
  std::vector<PointOutcome> outcomes(points.size());
  parallel_for(points.size(), opts.threads, [&](std::size_t i) {
    const bool check = opts.oracle_stride > 0 && i % opts.oracle_stride == 0;
    outcomes[i] = evaluate_point(points[i], check, opts);
  });
  for (auto& o : outcomes) {
    r.fidelity.push_back(o.fidelity);
    r.oracle.push_back(o.oracle);
    r.notes.push_back(std::move(o.note));
  }
}

}  // namespace

SweepResult sweep_intrinsic(const SystemParams& base, std::span<const double> ratios, const SweepOptions& opts) {
  base.validate();
  if (std::abs(base.block1.kappa_ex - base.block2.kappa_ex) > 1e-12 * base.block1.kappa_ex) {
    throw InvalidParameter("intrinsic sweep requires equal kappa_ex in both blocks");
  }
  require_monotone(ratios, "ratio");
  for (double r : ratios) {
    if (!(r >= 0.0)) throw InvalidParameter("loss ratios must be non-negative");
  }
  SweepResult r;
  r.axes.push_back({"kappa_i_over_kappa_ex", {ratios.begin(), ratios.end()}});
  std::vector<SystemParams> points;
  for (double x : ratios) {
    const double k = base.block1.kappa_ex;
    points.push_back(SystemParams::symmetric(k, k, x * k, 0.0, base.convention));
  }
  run_points(r, points, opts);
  return r;
}

SweepResult sweep_couplings(const SystemParams& base, std::span<const double> grid1, std::span<const double> grid2,
                            const SweepOptions& opts) {
  base.validate();
  const double ki = base.block1.kappa_i;
  if (!(ki > 0.0)) throw InvalidParameter("coupling sweep needs kappa_i > 0");
  require_monotone(grid1, "kappa_ex1/kappa_i");
  require_monotone(grid2, "kappa_ex2/kappa_i");
  for (double x : grid1) {
    if (!(x > 0.0)) throw InvalidParameter("coupling ratios must be positive");
  }
  for (double x : grid2) {
    if (!(x > 0.0)) throw InvalidParameter("coupling ratios must be positive");
  }
  SweepResult r;
  r.axes.push_back({"kappa_ex1_over_kappa_i", {grid1.begin(), grid1.end()}});
  r.axes.push_back({"kappa_ex2_over_kappa_i", {grid2.begin(), grid2.end()}});
  std::vector<SystemParams> points;
  for (double x1 : grid1) {
    for (double x2 : grid2) {
      points.push_back(SystemParams::symmetric(x1 * ki, x2 * ki, ki, base.block1.gamma_i, base.convention));
    }
  }
  run_points(r, points, opts);
  return r;
}

std::optional<double> exponential_rate(const SweepResult& r) {
  if (r.axes.size() != 1) return std::nullopt;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    const double x = r.axes[0].values[k];
    if (!r.fidelity[k] || x <= 0.0 || *r.fidelity[k] <= 0.0) continue;
    num -= x * std::log(*r.fidelity[k]);
    den += x * x;
  }
  if (den == 0.0) return std::nullopt;
  return num / den;
}

std::optional<double> swap_asymmetry(const SweepResult& r) {
  if (r.axes.size() != 2 || r.axes[0].values != r.axes[1].values) return std::nullopt;
  const std::size_t n = r.axes[0].values.size();
  double worst = 0.0;
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const auto& a = r.fidelity[i * n + j];
      const auto& b = r.fidelity[j * n + i];
      if (!a || !b) continue;
      worst = std::max(worst, std::abs(*a - *b));
      any = true;
    }
  }
  return any ? std::optional<double>(worst) : std::nullopt;
}

Table to_table(const SweepResult& r) {
  Table t;
  t.metadata = r.metadata;
  for (const auto& a : r.axes) t.columns.push_back(a.name);
  t.columns.insert(t.columns.end(), {"fidelity", "oracle_fidelity", "note"});
  const std::size_t n1 = r.axes.size() == 2 ? r.axes[1].values.size() : 1;
  for (std::size_t k = 0; k < r.size(); ++k) {
    std::vector<std::string> row;
    if (r.axes.size() == 2) {
      row.push_back(format_number(r.axes[0].values[k / n1]));
      row.push_back(format_number(r.axes[1].values[k % n1]));
    } else {
      row.push_back(format_number(r.axes[0].values[k]));
    }
    row.push_back(format_number(r.fidelity[k]));
    row.push_back(format_number(r.oracle[k]));
    row.push_back(r.notes[k]);
    t.rows.push_back(std::move(row));
  }
  return t;
}

}  // namespace qmem
