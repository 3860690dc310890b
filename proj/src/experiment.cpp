#include "bdg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>

// pchip.hpp in Boost 1.74 calls unqualified isnan.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>

#include "bdg/errors.hpp"
#include "bdg/io.hpp"
#include "bdg/linear_model.hpp"
#include "bdg/tdgl.hpp"

namespace bdg {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string output_path(const std::string& out_dir, const std::string& configured, const std::string& fallback) {
  const std::string name = configured.empty() ? fallback : configured;
  if (fs::path(name).is_absolute() || out_dir.empty()) return name;
  return (fs::path(out_dir) / name).string();
}

json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json fit_json(const FitResult& f) {
  return json{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
}

json resonance_json(const ResonanceResult& r) {
  json j{{"lambda_re", r.lambda.real()}, {"lambda_im", r.lambda.imag()}, {"P", r.p},       {"Q", r.q},
         {"prefactor", r.prefactor},     {"method", to_string(r.method)}, {"timescale", nullptr}};
  if (r.lambda.imag() < 0) j["timescale"] = predicted_decay_timescale(r);
  if (r.method == ResonanceMethod::ComplexDilationRoot) {
    j["theta_im"] = r.theta.imag();
    j["iterations"] = r.iterations;
    j["residual"] = r.residual;
  }
  return j;
}

double shell_delta(const RunContext& ctx) {
  return ctx.config.shell_delta ? *ctx.config.shell_delta : ctx.config.h * std::sqrt(ctx.model.mu);
}

}  // namespace

Command command_from_string(const std::string& s) {
  for (auto c : {Command::Tc, Command::AlphaStar, Command::Equilibrium, Command::Evolve, Command::LinearEvolve,
                 Command::Resonance, Command::CompareGl, Command::CheckInvariants})
    if (to_string(c) == s) return c;
  throw ConfigError("unknown command '" + s + "'");
}

std::string to_string(Command c) {
  switch (c) {
    case Command::Tc: return "tc";
    case Command::AlphaStar: return "alphastar";
    case Command::Equilibrium: return "equilibrium";
    case Command::Evolve: return "evolve";
    case Command::LinearEvolve: return "linear-evolve";
    case Command::Resonance: return "resonance";
    case Command::CompareGl: return "compare-gl";
    case Command::CheckInvariants: return "check-invariants";
  }
  return "?";
}

RadialFunction tabulated_function(const std::string& path) {
  auto [x, y] = read_two_column(path);
  const double lo = x.front(), hi = x.back();
  const double y_lo = y.front();
  auto spline = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(std::move(x), std::move(y));
  return [spline, lo, hi, y_lo](double k) {
    if (k < lo) return y_lo;
    if (k > hi) return 0.0;
    return (*spline)(k);
  };
}

Model build_model(const RunConfig& config) {
  Model model;
  model.mu = config.mu;
  model.grid = make_grid(config.dimension, config.mu, config.grid);
  const PotentialSpec& p = config.potential;
  switch (p.kind) {
    case PotentialKind::Gaussian:
      model.potential = make_gaussian_rank_one(p.amplitude, p.width, model.grid);
      break;
    case PotentialKind::Tabulated:
      model.potential = make_rank_one(tabulated_function(p.file), model.grid);
      break;
    case PotentialKind::Contact:
      model.potential = Contact1D{p.coupling};
      break;
    case PotentialKind::LocalGaussian: {
      const double depth = p.amplitude, w = p.width;
      model.potential = make_local_radial([depth, w](double q) { return -depth * std::exp(-q * q / (2 * w * w)); },
                                          model.grid);
      break;
    }
    case PotentialKind::LocalTabulated:
      model.potential = make_local_radial(tabulated_function(p.file), model.grid);
      break;
  }
  return model;
}

RunContext prepare_run(const RunConfig& config) {
  RunContext ctx;
  ctx.config = config;
  ctx.config_hash = hex64(fnv1a(emit_config(config)));
  ctx.model = build_model(config);
  ctx.reference = critical_temperature(ctx.model);
  ctx.temperature = config.temperature ? *config.temperature
                                       : ctx.reference.critical_temperature + config.tau * config.h * config.h;
  if (!(ctx.temperature > 0)) throw ConfigError("run.tau: resolved temperature is not positive");
  return ctx;
}

ResonanceInput resonance_input(const RunContext& ctx) {
  ResonanceInput in;
  in.dimension = ctx.model.grid.dimension;
  in.mu = ctx.model.mu;
  in.k_max = ctx.model.grid.k_max;
  if (const auto* r = std::get_if<SeparableRankOne>(&ctx.model.potential)) {
    in.phi = r->profile;
  } else if (const auto* c = std::get_if<Contact1D>(&ctx.model.potential)) {
    const double u = std::sqrt(c->coupling / (2.0 * std::numbers::pi));
    in.phi = [u](double) { return u; };
  } else {
    throw DomainError("resonance requires a rank-one potential");
  }
  return in;
}

double resolve_horizon(const RunContext& ctx) {
  if (ctx.config.evolve.t_end) return *ctx.config.evolve.t_end;
  const double gap = std::abs(ctx.temperature - ctx.reference.critical_temperature);
  if (!(gap > 0)) throw ConfigError("evolve.t_end: required when T = T_c");
  return ctx.config.evolve.horizon / gap;
}

EvolveConfig resolve_evolve_config(const RunContext& ctx, const BdGState& state0) {
  EvolveConfig ec;
  const double e_max = max_quasiparticle_energy(state0, ctx.model);
  ec.dt = ctx.config.evolve.dt ? *ctx.config.evolve.dt : ctx.config.evolve.dt_factor / e_max;
  ec.t_end = resolve_horizon(ctx);
  ec.observe_every = ctx.config.evolve.observe_every;
  ec.midpoint_iters = ctx.config.evolve.midpoint_iters;
  return ec;
}

EvolveOutcome run_evolve(const RunContext& ctx, const std::optional<BdGState>& initial,
                         const std::string& snapshot_dir) {
  const RunConfig& cfg = ctx.config;
  EvolveOutcome out;
  out.initial = initial ? *initial
                        : build_initial_state(cfg.initial, cfg.psi0, cfg.h, ctx.reference, ctx.model, ctx.temperature);
  out.evolve = resolve_evolve_config(ctx, out.initial);
  Monitor monitor(ctx.model, ctx.reference, cfg.h, ctx.temperature, out.initial);

  std::vector<double> snaps = cfg.output.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto observer = [&](double t, const BdGState& state, const Eigen::VectorXcd& delta) {
    monitor.observe(t, state, delta);
    while (!snapshot_dir.empty() && next_snap < snaps.size() && t >= snaps[next_snap] - 1e-12) {
      Snapshot snap;
      snap.config_hash = ctx.config_hash;
      snap.t = t;
      snap.mu = ctx.model.mu;
      snap.temperature = ctx.temperature;
      snap.critical_temperature = ctx.reference.critical_temperature;
      snap.grid = ctx.model.grid;
      snap.state = state;
      write_snapshot((fs::path(snapshot_dir) / ("snapshot_" + std::to_string(next_snap) + ".txt")).string(), snap);
      ++next_snap;
    }
  };
  const EvolveResult result = evolve_nonlinear(out.initial, ctx.model, out.evolve, observer);

  out.final_state = result.state;
  out.records = monitor.records();
  out.failures = monitor.failures();
  out.max_abs_psi_sq_deviation = monitor.max_abs_psi_sq_deviation();
  out.max_pressure_drift = monitor.max_pressure_drift();
  out.max_s_drift = monitor.max_s_drift();
  out.min_abs_psi = INFINITY;
  for (const auto& r : out.records) {
    out.max_eq10_residual = std::max(out.max_eq10_residual, r.eq10_residual);
    out.min_abs_psi = std::min(out.min_abs_psi, std::abs(r.psi));
  }
  return out;
}

LinearOutcome run_linear(const RunContext& ctx, std::size_t samples) {
  const RunConfig& cfg = ctx.config;
  const LinearModel lm = build_linear_model(ctx.model, ctx.temperature);
  const Eigen::VectorXcd alpha0 = (cfg.h * cfg.psi0) * ctx.reference.alpha_star.cast<std::complex<double>>();
  const LinearOverlap overlap(lm, ctx.reference.alpha_star, alpha0);
  const double t_end = resolve_horizon(ctx);

  LinearOutcome out;
  out.resonance = resonance_leading_order(resonance_input(ctx), ctx.temperature, ctx.reference.critical_temperature);
  out.fit_window = std::min(t_end, 3.0 / std::abs(out.resonance.lambda.imag()));
  for (std::size_t j = 0; j <= samples; ++j) {
    const double t = t_end * static_cast<double>(j) / static_cast<double>(samples);
    out.t.push_back(t);
    out.psi.push_back(overlap(t) / cfg.h);
  }
  std::vector<double> ft, fy;
  for (std::size_t j = 0; j <= 200; ++j) {
    const double t = out.fit_window * static_cast<double>(j) / 200.0;
    ft.push_back(t);
    fy.push_back(std::abs(overlap(t)) / cfg.h);
  }
  out.fit = fit_scaling(ft, fy, FitModel::Exponential);
  out.decay_factor = std::abs(out.psi.back()) / std::abs(out.psi.front());
  return out;
}

GlComparison compare_gl(const RunContext& ctx, const EvolveOutcome& bdg, double decay_rate) {
  GlComparison c;
  c.params = tdgl_preset(ctx.config.c_gl, ctx.temperature - ctx.reference.critical_temperature, decay_rate);
  std::vector<double> times;
  for (const auto& r : bdg.records) times.push_back(r.t);
  const std::complex<double> psi0 = bdg.records.front().psi;
  c.tdgl = tdgl_evolve(psi0, c.params, times);
  c.tdgl_final_ratio = std::abs(c.tdgl.back().psi) / std::abs(psi0);
  c.bdg_max_deviation = bdg.max_abs_psi_sq_deviation;
  c.bdg_min_abs_psi = bdg.min_abs_psi;
  c.bound = ctx.config.plateau_constant * std::sqrt(ctx.config.h);
  c.tdgl_decayed = c.tdgl_final_ratio < 0.1;
  c.bdg_within_bound = c.bdg_max_deviation <= c.bound;
  c.ordering = c.tdgl_decayed && c.bdg_min_abs_psi > 0.1 * std::abs(psi0);
  return c;
}

json RunSummary::to_json() const {
  json j = data;
  j["command"] = command;
  j["invariants_ok"] = invariants_ok();
  j["failures"] = failures;
  j["wall_time_s"] = wall_time;
  return j;
}

RunSummary run_experiment(const RunConfig& config, Command command, const std::string& out_dir) {
  const auto start = std::chrono::steady_clock::now();
  if (!out_dir.empty()) fs::create_directories(out_dir);
  const RunContext ctx = prepare_run(config);
  const double tc = ctx.reference.critical_temperature;
  const double h = config.h;

  RunSummary summary;
  summary.command = to_string(command);
  json& d = summary.data;
  d["config_hash"] = ctx.config_hash;
  d["T_c"] = tc;
  d["temperature"] = ctx.temperature;
  d["h"] = h;
  d["potential"] = potential_name(ctx.model.potential);
  d["grid_n"] = ctx.model.grid.size();
  const std::string csv = output_path(out_dir, config.output.csv, summary.command + ".csv");

  switch (command) {
    case Command::Tc: {
      d["spectral_gap"] = ctx.reference.spectral_gap;
      d["eigen_residual"] = ctx.reference.eigen_residual;
      d["lowest_eigenvalue_at_tc"] = lowest_eigenvalue(ctx.model, tc);
      if (!std::isnan(ctx.reference.scalar_condition)) d["scalar_condition"] = ctx.reference.scalar_condition;
      d["shell_delta"] = shell_delta(ctx);
      d["shell_mass"] = fermi_shell_mass(ctx.reference.alpha_star.cast<std::complex<double>>(), shell_delta(ctx),
                                         ctx.model.mu, ctx.model.grid);
      break;
    }
    case Command::AlphaStar: {
      std::ofstream out(csv);
      if (!out) throw ConfigError("output.csv: cannot write '" + csv + "'");
      out << "k,weight,alpha_star\n";
      for (Eigen::Index i = 0; i < ctx.reference.alpha_star.size(); ++i)
        out << format_double(ctx.model.grid.nodes[i]) << ',' << format_double(ctx.model.grid.weights[i]) << ','
            << format_double(ctx.reference.alpha_star[i]) << '\n';
      json masses = json::array();
      const Eigen::VectorXcd a = ctx.reference.alpha_star.cast<std::complex<double>>();
      for (double f : {0.02, 0.01, 0.005}) {
        const double delta = f * std::sqrt(ctx.model.mu);
        masses.push_back({{"delta", delta}, {"mass", fermi_shell_mass(a, delta, ctx.model.mu, ctx.model.grid)}});
      }
      d["shell_masses"] = masses;
      d["spectral_gap"] = ctx.reference.spectral_gap;
      d["csv"] = csv;
      break;
    }
    case Command::Equilibrium: {
      if (!(ctx.temperature < tc)) throw DomainError("equilibrium requires T < T_c (use tau < 0)");
      const Eigen::VectorXcd seed =
          delta_from_alpha(ctx.model, 0.05 * ctx.reference.alpha_star.cast<std::complex<double>>());
      const GapSolution eq = gap_equation_solve(ctx.model, ctx.temperature, seed);
      const Decomposition dec = decompose(eq.state, ctx.reference, ctx.model.grid, h, ctx.temperature);
      d["delta_norm"] = weighted_norm(ctx.model.grid, eq.delta);
      d["iterations"] = eq.iterations;
      d["gap_residual"] = eq.residual;
      d["pressure_difference"] = pressure_difference(eq.state, ctx.temperature, ctx.model);
      d["psi"] = complex_json(dec.psi);
      d["xi_norm_over_h2"] = weighted_norm(ctx.model.grid, dec.xi) / (h * h);
      d["eta_norm_over_h2"] = weighted_norm(ctx.model.grid, dec.eta) / (h * h);
      std::ofstream out(csv);
      if (!out) throw ConfigError("output.csv: cannot write '" + csv + "'");
      out << "k,gamma,alpha_re,alpha_im,delta_re,delta_im\n";
      for (Eigen::Index i = 0; i < eq.delta.size(); ++i)
        out << format_double(ctx.model.grid.nodes[i]) << ',' << format_double(eq.state.gamma[i]) << ','
            << format_double(eq.state.alpha[i].real()) << ',' << format_double(eq.state.alpha[i].imag()) << ','
            << format_double(eq.delta[i].real()) << ',' << format_double(eq.delta[i].imag()) << '\n';
      d["csv"] = csv;
      break;
    }
    case Command::Evolve: {
      const EvolveOutcome run = run_evolve(ctx, std::nullopt, out_dir);
      write_timeseries_csv(csv, run.records);
      d["dt"] = run.evolve.dt;
      d["t_end"] = run.evolve.t_end;
      d["observations"] = run.records.size();
      d["max_abs_psi_sq_deviation"] = run.max_abs_psi_sq_deviation;
      d["pressure_drift"] = run.max_pressure_drift;
      d["s_drift"] = run.max_s_drift;
      d["eq10_residual"] = run.max_eq10_residual;
      d["initial_pressure"] = pressure_difference(run.initial, ctx.temperature, ctx.model);
      const EtaCubicResidual eta = eta_cubic_residual(run.final_state, run.initial, ctx.temperature,
                                                      ctx.model.grid, ctx.model.mu, shell_delta(ctx));
      d["eta_cubic_outside"] = eta.outside;
      d["eta_cubic_inside"] = eta.inside;
      d["csv"] = csv;
      summary.failures = run.failures;
      break;
    }
    case Command::LinearEvolve: {
      const LinearOutcome lin = run_linear(ctx);
      std::vector<ObservablesRecord> rows;
      for (std::size_t j = 0; j < lin.t.size(); ++j) {
        ObservablesRecord r;
        r.t = lin.t[j];
        r.psi = lin.psi[j];
        r.abs_psi_sq = std::norm(lin.psi[j]);
        r.pressure_drift = r.s_drift = r.xi_norm = r.eta_norm = r.delta_norm = r.eq10_residual =
            r.admissibility_margin = std::nan("");
        rows.push_back(r);
      }
      write_timeseries_csv(csv, rows);
      d["fitted_decay_rate"] = -lin.fit.slope;
      d["fit"] = fit_json(lin.fit);
      d["fit_window"] = lin.fit_window;
      d["decay_factor"] = lin.decay_factor;
      d["lambda"] = complex_json(lin.resonance.lambda);
      d["resonance_rate"] = std::abs(lin.resonance.lambda.imag());
      d["csv"] = csv;
      break;
    }
    case Command::Resonance: {
      const ResonanceResult lead = resonance_leading_order(resonance_input(ctx), ctx.temperature, tc);
      d.update(resonance_json(lead));
      const auto* r = std::get_if<SeparableRankOne>(&ctx.model.potential);
      if (config.rootfind && r && r->gaussian) {
        const ResonanceResult root = resonance_rootfind_gaussian(
            *r->gaussian, ctx.model.grid.dimension, ctx.model.mu, ctx.temperature, tc, {0.0, config.theta_im});
        d["root"] = resonance_json(root);
      }
      break;
    }
    case Command::CompareGl: {
      const EvolveOutcome run = run_evolve(ctx, std::nullopt, out_dir);
      write_timeseries_csv(csv, run.records);
      const ResonanceResult lead = resonance_leading_order(resonance_input(ctx), ctx.temperature, tc);
      const double rate = std::abs(lead.lambda.imag());
      const GlComparison cmp = compare_gl(ctx, run, rate);
      const std::string tdgl_csv = output_path(out_dir, "", "tdgl.csv");
      std::ofstream out(tdgl_csv);
      if (!out) throw ConfigError("cannot write '" + tdgl_csv + "'");
      out << "t,psi_re,psi_im,abs_psi,gl_energy\n";
      for (const auto& s : cmp.tdgl)
        out << format_double(s.t) << ',' << format_double(s.psi.real()) << ',' << format_double(s.psi.imag()) << ','
            << format_double(std::abs(s.psi)) << ',' << format_double(s.gl_energy) << '\n';
      d["dt"] = run.evolve.dt;
      d["t_end"] = run.evolve.t_end;
      d["lambda"] = complex_json(lead.lambda);
      d["tdgl"] = {{"a", cmp.params.a}, {"b", cmp.params.b}, {"d", complex_json(cmp.params.d)},
                   {"final_ratio", cmp.tdgl_final_ratio}, {"decayed_below_0.1", cmp.tdgl_decayed}};
      d["bdg"] = {{"max_abs_psi_sq_deviation", run.max_abs_psi_sq_deviation},
                  {"min_abs_psi", run.min_abs_psi},
                  {"bound", cmp.bound},
                  {"within_bound", cmp.bdg_within_bound},
                  {"pressure_drift", run.max_pressure_drift},
                  {"s_drift", run.max_s_drift},
                  {"eq10_residual", run.max_eq10_residual}};
      d["ordering_holds"] = cmp.ordering;
      d["csv"] = csv;
      d["tdgl_csv"] = tdgl_csv;
      summary.failures = run.failures;
      break;
    }
    case Command::CheckInvariants: {
      const BdGState s0 =
          build_initial_state(config.initial, config.psi0, h, ctx.reference, ctx.model, ctx.temperature);
      EvolveConfig ec = resolve_evolve_config(ctx, s0);
      ec.t_end = std::min(ec.t_end, 400.0 * ec.dt);
      ec.observe_every = 50;
      Monitor coarse(ctx.model, ctx.reference, h, ctx.temperature, s0);
      evolve_nonlinear(s0, ctx.model, ec,
                       [&](double t, const BdGState& s, const Eigen::VectorXcd& dl) { coarse.observe(t, s, dl); });
      EvolveConfig half = ec;
      half.dt = 0.5 * ec.dt;
      half.observe_every = 100;
      Monitor fine(ctx.model, ctx.reference, h, ctx.temperature, s0);
      evolve_nonlinear(s0, ctx.model, half,
                       [&](double t, const BdGState& s, const Eigen::VectorXcd& dl) { fine.observe(t, s, dl); });
      const double ratio = coarse.max_pressure_drift() / fine.max_pressure_drift();
      d["s_drift"] = std::max(coarse.max_s_drift(), fine.max_s_drift());
      d["pressure_drift_dt"] = coarse.max_pressure_drift();
      d["pressure_drift_dt_half"] = fine.max_pressure_drift();
      d["pressure_drift_ratio"] = ratio;
      summary.failures = coarse.failures();
      for (const auto& f : fine.failures()) summary.failures.push_back(f);
      if (coarse.max_pressure_drift() > 1e-13 && !(ratio >= 4.0))
        summary.failures.push_back("pressure drift ratio under dt halving = " + format_double(ratio));

      // Forward then backward with the same frozen gap field.
      const HamiltonianField hf = hamiltonian_field(s0, ctx.model);
      BdGState fwd, back;
      unitary_step(s0, hf.epsilon, hf.delta, ec.dt, fwd);
      unitary_step(fwd, hf.epsilon, hf.delta, -ec.dt, back);
      const double sym = std::max((back.gamma - s0.gamma).cwiseAbs().maxCoeff(),
                                  (back.alpha - s0.alpha).cwiseAbs().maxCoeff());
      d["time_symmetry_defect"] = sym;
      if (!(sym <= 1e-10)) summary.failures.push_back("time symmetry defect = " + format_double(sym));

      // Global phase covariance.
      BdGState rotated = s0;
      const std::complex<double> phase = std::polar(1.0, 0.7);
      rotated.alpha *= phase;
      EvolveConfig short_run = ec;
      short_run.t_end = std::min(ec.t_end, 50.0 * ec.dt);
      const EvolveResult a = evolve_nonlinear(s0, ctx.model, short_run);
      const EvolveResult b = evolve_nonlinear(rotated, ctx.model, short_run);
      const double gauge = std::max((a.state.gamma - b.state.gamma).cwiseAbs().maxCoeff(),
                                    (phase * a.state.alpha - b.state.alpha).cwiseAbs().maxCoeff());
      d["gauge_defect"] = gauge;
      if (!(gauge <= 1e-12)) summary.failures.push_back("gauge covariance defect = " + format_double(gauge));
      break;
    }
  }

  summary.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const std::string summary_path = output_path(out_dir, config.output.summary, summary.command + ".json");
  std::ofstream js(summary_path);
  if (!js) throw ConfigError("output.summary: cannot write '" + summary_path + "'");
  js << summary.to_json().dump(2) << '\n';
  return summary;
}

}  // namespace bdg
