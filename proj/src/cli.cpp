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

#include "qmem/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <string>

#include <CLI11.hpp>

#include "qmem/config.hpp"
#include "qmem/errors.hpp"
#include "qmem/kernels.hpp"
#include "qmem/version.hpp"

namespace qmem {

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string config_path;
  std::string output_dir;
  unsigned threads_flag = 0;
  bool timestamp = false;
};

std::string fixed(double v, int prec = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", prec, v);
  return buf;
}

unsigned resolve_threads(const Context& ctx, const RunConfig& cfg) {
  if (ctx.threads_flag > 0) return ctx.threads_flag;
  if (const char* env = std::getenv("QMEM_THREADS"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 1024) throw ConfigError("QMEM_THREADS", "must be an integer in [1, 1024]");
    return static_cast<unsigned>(v);
  }
  return cfg.threads.value_or(1);
}

std::vector<std::pair<std::string, std::string>> base_metadata(const Context& ctx, const RunConfig& cfg,
                                                               const std::string& command, const std::string& kind,
                                                               const std::string& title) {
  std::vector<std::pair<std::string, std::string>> m{
      {"tool", std::string("qmem ") + kVersion},
      {"command", command},
      {"kind", kind},
      {"title", title},
      {"config_hash", cfg.hash()},
      {"convention", to_string(cfg.params.convention)},
      {"units", "time ns; rates GHz (ordinary frequency); amplitudes dimensionless"},
  };
  if (ctx.timestamp) {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m.emplace_back("timestamp (non-deterministic)", buf);
  }
  return m;
}

std::filesystem::path output_dir(const Context& ctx, const RunConfig& cfg) {
  std::filesystem::path dir = ctx.output_dir.empty() ? cfg.output_dir : std::filesystem::path(ctx.output_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

void emit(const Context& ctx, const RunConfig& cfg, const std::string& stem, const Table& t) {
  const auto dir = output_dir(ctx, cfg);
  const auto base = dir / (stem + "-" + cfg.hash());
  const auto csv = base.string() + ".csv";
  const auto svg = base.string() + ".svg";
  write_text(csv, to_csv(t));
  write_text(svg, to_svg(t, default_plot(t)));
  ctx.out << "wrote " << csv << "\nwrote " << svg << "\n";
}

MidpointState resolve_midpoint(const Context& ctx, const RunConfig& cfg) {
  if (cfg.midpoint) {
    return {cfg.midpoint->alpha1, cfg.midpoint->alpha2, cfg.midpoint->beta, cfg.g1_rate(), cfg.g2_rate()};
  }
  const OptimizedMidpoint best = optimize_midpoint(cfg.params, cfg.g1_rate(), cfg.g2_rate(), cfg.grid.window);
  ctx.err << "optimized midpoint: theta = " << fixed(best.theta, 6) << ", feasible grid points "
          << best.feasible_points << "\n";
  return best.mid;
}

void midpoint_metadata(Table& t, const MidpointState& mid, const SystemParams& p) {
  const StructureConstants sc = structure_constants(mid, p);
  t.metadata.emplace_back("midpoint", format_number(mid.alpha1) + " " + format_number(mid.alpha2) + " " +
                                          format_number(mid.beta));
  t.metadata.emplace_back("g1_0_ghz", format_number(rate_to_ghz(mid.g1)));
  t.metadata.emplace_back("g2_0_ghz", format_number(rate_to_ghz(mid.g2)));
  t.metadata.emplace_back("fidelity_estimate", format_number(sc.G));
  t.metadata.emplace_back("backward_boundary", format_number(sc.Gprime));
}

int cmd_synthesize(const Context& ctx) {
  const RunConfig cfg = load_config(ctx.config_path);
  const MidpointState mid = resolve_midpoint(ctx, cfg);
  const TransferGrids g = transfer_grids(mid, cfg.params, cfg.grid);
  const ControlProfile prof = control_profiles(mid, cfg.params, g.profile);

  Table t;
  t.metadata = base_metadata(ctx, cfg, "synthesize", "controls", "Coupling profiles");
  midpoint_metadata(t, mid, cfg.params);
  t.metadata.emplace_back("regime", to_string(prof.regime));
  t.metadata.emplace_back("window_ns", format_number(g.window.t_initial) + " " + format_number(g.window.t_final));
  t.metadata.emplace_back("guard_events", std::to_string(prof.diagnostics.size()));
  t.columns = {"t_ns", "g1_ghz", "g2_ghz"};
  for (std::size_t k = 0; k < prof.size(); k += cfg.output_stride) {
    t.rows.push_back({format_number(prof.time[k]), format_number(rate_to_ghz(prof.g1[k])),
                      format_number(rate_to_ghz(prof.g2[k]))});
  }
  for (const auto& e : prof.diagnostics) {
    ctx.err << "guard: g" << e.control << " held at " << fixed(rate_to_ghz(e.held_value)) << " GHz near t = "
            << fixed(e.time) << " ns\n";
  }
  ctx.out << "regime: " << to_string(prof.regime) << "\nsamples: " << prof.size() << "\n";
  emit(ctx, cfg, "synthesize", t);
  return kExitOk;
}

int cmd_simulate(const Context& ctx) {
  const RunConfig cfg = load_config(ctx.config_path);
  const MidpointState mid = resolve_midpoint(ctx, cfg);
  const TransferGrids g = transfer_grids(mid, cfg.params, cfg.grid);
  const ControlProfile prof = control_profiles(mid, cfg.params, g.profile);
  const std::vector<double> grid = half_rate_grid(g.profile);
  const CoefficientTrajectory exact = analytic_coefficient_trajectory(grid, mid, prof, cfg.params);
  const CoefficientTrajectory rk = integrate_effective(prof, exact.at(0), cfg.params, grid);

  double dev = 0.0;
  double res = 0.0;
  for (std::size_t k = 0; k < rk.size(); ++k) {
    dev = std::max({dev, std::abs(rk.alpha1[k] - exact.alpha1[k]), std::abs(rk.alpha2[k] - exact.alpha2[k]),
                    std::abs(rk.beta[k] - exact.beta[k])});
    res = std::max(res, std::abs(rk.residual[k]));
  }

  Table t;
  t.metadata = base_metadata(ctx, cfg, "simulate", "trajectory", "Amplitude trajectory");
  midpoint_metadata(t, mid, cfg.params);
  t.metadata.emplace_back("max_rk4_deviation", format_number(dev));
  t.metadata.emplace_back("max_bright_residual_over_kappa_ex1", format_number(res / cfg.params.block1.kappa_ex));
  t.columns = {"t_ns", "alpha1", "alpha2", "beta", "norm", "bright_residual_per_ns",
               "alpha1_closed", "alpha2_closed", "beta_closed"};
  for (std::size_t k = 0; k < rk.size(); k += cfg.output_stride) {
    t.rows.push_back({format_number(rk.time[k]), format_number(rk.alpha1[k]), format_number(rk.alpha2[k]),
                      format_number(rk.beta[k]), format_number(rk.norm[k]), format_number(rk.residual[k]),
                      format_number(exact.alpha1[k]), format_number(exact.alpha2[k]), format_number(exact.beta[k])});
  }
  ctx.out << "steps: " << rk.size() - 1 << "\nmax |rk4 - closed form|: " << format_number(dev)
          << "\nmax |bright residual| / kappa_ex1: " << format_number(res / cfg.params.block1.kappa_ex) << "\n"
          << "final norm: " << fixed(rk.norm.back(), 6) << "\n";
  emit(ctx, cfg, "simulate", t);
  return kExitOk;
}

int cmd_verify(const Context& ctx) {
  const RunConfig cfg = load_config(ctx.config_path);
  const MidpointState mid = resolve_midpoint(ctx, cfg);
  const SystemParams& p = cfg.params;
  const double eps = p.epsilon();

  const TransferGrids g = transfer_grids(mid, p, cfg.grid);
  const OpenSystem sys = build_system(p, cfg.truncation);
  const OperatorMatrix b1 = mode_annihilator("b1", sys.space);
  const OperatorMatrix b2 = mode_annihilator("b2", sys.space);
  const OperatorMatrix dark = cplx(std::sqrt(eps / (1.0 + eps))) * mode_annihilator("a1", sys.space) -
                              cplx(1.0 / std::sqrt(1.0 + eps)) * mode_annihilator("a2", sys.space);
  const OperatorMatrix n_b1 = b1.adjoint() * b1;
  const OperatorMatrix n_b2 = b2.adjoint() * b2;
  const OperatorMatrix n_dark = dark.adjoint() * dark;
  const double weight = std::norm(cfg.input.c_e);

  Table t;
  t.columns = {"t_ns", "p_b1", "p_b2", "p_dark", "alpha1_sq", "alpha2_sq", "beta_sq"};
  double d1 = 0.0, d2 = 0.0, dd = 0.0, multi = 0.0;
  EvolveOptions eo;
  eo.check_stride = cfg.check_stride;
  eo.record_stride = cfg.output_stride;
  eo.keep_states = false;
  eo.observer = [&](double time, const DensityMatrix& rho) {
    const Coefficients c = coeffs_analytic(time, mid, p);
    const double p1 = expectation(rho, n_b1).real();
    const double p2 = expectation(rho, n_b2).real();
    const double pd = expectation(rho, n_dark).real();
    const double a1 = weight * c.alpha1 * c.alpha1;
    const double a2 = weight * c.alpha2 * c.alpha2;
    const double bb = weight * c.beta * c.beta;
    d1 = std::max(d1, std::abs(p1 - a1));
    d2 = std::max(d2, std::abs(p2 - a2));
    dd = std::max(dd, std::abs(pd - bb));
    multi = std::max(multi, multi_excitation_population(rho));
    t.rows.push_back({format_number(time), format_number(p1), format_number(p2), format_number(pd),
                      format_number(a1), format_number(a2), format_number(bb)});
  };

  const ControlProfile prof = control_profiles(mid, p, g.profile);
  const MasterResult res = evolve_master(sys, initial_state(sys.space, cfg.input), prof, g.oracle, eo);
  const Coefficients first = coeffs_analytic(g.oracle.front(), mid, p);
  const Coefficients last = coeffs_analytic(g.oracle.back(), mid, p);
  const double phase = first.alpha1 * last.alpha2 < 0.0 ? -1.0 : 1.0;
  const double fid = transfer_fidelity(res.final_state, cfg.input, phase);
  const auto pops = fock_populations(res.final_state, "b2");
  const double estimate = structure_constants(mid, p).G;

  t.metadata = base_metadata(ctx, cfg, "verify", "oracle", "Oracle populations");
  midpoint_metadata(t, mid, p);
  t.metadata.emplace_back("truncation", std::to_string(cfg.truncation.a1) + " " + std::to_string(cfg.truncation.b1) +
                                            " " + std::to_string(cfg.truncation.a2) + " " +
                                            std::to_string(cfg.truncation.b2));
  t.metadata.emplace_back("oracle_fidelity", format_number(fid));
  t.metadata.emplace_back("output_phase", format_number(phase));

  std::string pop_line;
  for (double x : pops) pop_line += " " + fixed(x, 6);
  ctx.out << "fidelity: " << fixed(fid, 6) << "\n"
          << "closed-form estimate G: " << fixed(estimate, 6) << "\n"
          << "output phase: " << (phase > 0 ? "+1" : "-1") << "\n"
          << "b2 populations:" << pop_line << "\n"
          << "max |p_b1 - alpha1^2|: " << format_number(d1) << "\n"
          << "max |p_b2 - alpha2^2|: " << format_number(d2) << "\n"
          << "max |p_dark - beta^2|: " << format_number(dd) << "\n"
          << "max multi-excitation population: " << format_number(multi) << "\n"
          << "max trace drift: " << format_number(res.max_trace_drift) << "\n"
          << "min eigenvalue: " << format_number(res.min_eigenvalue) << "\n"
          << "window: [" << fixed(g.window.t_initial, 4) << ", " << fixed(g.window.t_final, 4) << "] ns"
          << (g.window.initial_capped || g.window.final_capped ? " (capped)" : "") << "\n"
          << "oracle steps: " << res.steps << " (" << kernels::to_string(kernels::active_isa()) << ")\n";
  emit(ctx, cfg, "verify", t);
  return kExitOk;
}

SweepOptions sweep_options(const Context& ctx, const RunConfig& cfg) {
  SweepOptions o;
  o.g_scale = cfg.sweep.g_scale;
  o.oracle_stride = cfg.sweep.oracle_stride;
  o.oracle_truncation = cfg.sweep.oracle_truncation;
  o.grid = cfg.grid;
  o.threads = resolve_threads(ctx, cfg);
  return o;
}

void sweep_summary(const Context& ctx, const SweepResult& r) {
  std::size_t missing = 0;
  double worst = 0.0;
  std::size_t checks = 0;
  for (std::size_t k = 0; k < r.size(); ++k) {
    if (!r.fidelity[k]) {
      ++missing;
      ctx.err << "point " << k << ": " << r.notes[k] << "\n";
    }
    if (r.fidelity[k] && r.oracle[k]) {
      worst = std::max(worst, std::abs(*r.fidelity[k] - *r.oracle[k]));
      ++checks;
    }
  }
  ctx.out << "points: " << r.size() << " (missing " << missing << ")\n"
          << "oracle checks: " << checks << ", max |estimate - oracle|: " << format_number(worst) << "\n";
}

int cmd_sweep_intrinsic(const Context& ctx) {
  const RunConfig cfg = load_config(ctx.config_path);
  SweepResult r = sweep_intrinsic(cfg.params, cfg.sweep.ratios, sweep_options(ctx, cfg));
  r.metadata = base_metadata(ctx, cfg, "sweep intrinsic", "sweep-intrinsic", "Fidelity vs intrinsic loss ratio");
  r.metadata.emplace_back("kappa_ex_ghz", format_number(rate_to_ghz(cfg.params.block1.kappa_ex)));
  r.metadata.emplace_back("g_scale", format_number(cfg.sweep.g_scale));
  if (auto a = exponential_rate(r)) r.metadata.emplace_back("exponential_fit_rate", format_number(*a));
  sweep_summary(ctx, r);
  emit(ctx, cfg, "sweep-intrinsic", to_table(r));
  return kExitOk;
}

int cmd_sweep_couplings(const Context& ctx) {
  const RunConfig cfg = load_config(ctx.config_path);
  SweepResult r = sweep_couplings(cfg.params, cfg.sweep.grid1, cfg.sweep.grid2, sweep_options(ctx, cfg));
  r.metadata = base_metadata(ctx, cfg, "sweep couplings", "sweep-couplings", "Fidelity vs output coupling ratios");
  r.metadata.emplace_back("kappa_i_ghz", format_number(rate_to_ghz(cfg.params.block1.kappa_i)));
  r.metadata.emplace_back("g_scale", format_number(cfg.sweep.g_scale));
  if (auto a = swap_asymmetry(r)) r.metadata.emplace_back("swap_asymmetry", format_number(*a));
  sweep_summary(ctx, r);
  emit(ctx, cfg, "sweep-couplings", to_table(r));
  return kExitOk;
}

int cmd_report(const Context& ctx, const std::string& input, const std::string& output) {
  const Table t = parse_csv(read_text(input));
  std::filesystem::path out = output;
  if (out.empty()) out = std::filesystem::path(input).replace_extension(".svg");
  write_text(out, to_svg(t, default_plot(t)));
  ctx.out << "wrote " << out.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal-control synthesis and verification for two-block quantum memory transfer", "qmem"};
  app.set_version_flag("--version", std::string("qmem ") + kVersion);
  app.require_subcommand(1);

  Context ctx{out, err, {}, {}, 0, false};
  app.add_option("--threads", ctx.threads_flag, "Worker cap for sweeps (fallback: QMEM_THREADS)")
      ->check(CLI::Range(1, 1024));
  app.add_flag("--timestamp", ctx.timestamp, "Add a wall-clock timestamp to output metadata");

  auto add_compute = [&](CLI::App* sub) {
    sub->add_option("--config", ctx.config_path, "Run configuration (JSON)")->required();
    sub->add_option("--output-dir", ctx.output_dir, "Overrides output_dir from the configuration");
  };
  CLI::App* synth = app.add_subcommand("synthesize", "Write the coupling profiles g1(t), g2(t)");
  add_compute(synth);
  CLI::App* sim = app.add_subcommand("simulate", "Integrate the amplitude equations under synthesized controls");
  add_compute(sim);
  CLI::App* ver = app.add_subcommand("verify", "Run the master-equation oracle and compare with the closed form");
  add_compute(ver);
  CLI::App* sweep = app.add_subcommand("sweep", "Fidelity sweeps");
  sweep->require_subcommand(1);
  CLI::App* sw_int = sweep->add_subcommand("intrinsic", "Fidelity against kappa_i / kappa_ex");
  add_compute(sw_int);
  CLI::App* sw_cpl = sweep->add_subcommand("couplings", "Fidelity over kappa_ex1 / kappa_i and kappa_ex2 / kappa_i");
  add_compute(sw_cpl);
  CLI::App* rep = app.add_subcommand("report", "Re-render an SVG plot from a qmem CSV");
  std::string report_in;
  std::string report_out;
  rep->add_option("csv", report_in, "CSV written by qmem")->required();
  rep->add_option("-o,--output", report_out, "SVG path (default: alongside the CSV)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  try {
    if (*synth) return cmd_synthesize(ctx);
    if (*sim) return cmd_simulate(ctx);
    if (*ver) return cmd_verify(ctx);
    if (*sw_int) return cmd_sweep_intrinsic(ctx);
    if (*sw_cpl) return cmd_sweep_couplings(ctx);
    if (*rep) return cmd_report(ctx, report_in, report_out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const InfeasiblePoint& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitRuntime;
}

}  // namespace qmem
