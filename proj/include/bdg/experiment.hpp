#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bdg/config.hpp"
#include "bdg/dynamics.hpp"
#include "bdg/fit.hpp"
#include "bdg/observables.hpp"
#include "bdg/resonance.hpp"
#include "bdg/spectral.hpp"
#include "bdg/tdgl.hpp"

namespace bdg {

enum class Command { Tc, AlphaStar, Equilibrium, Evolve, LinearEvolve, Resonance, CompareGl, CheckInvariants };

Command command_from_string(const std::string& s);
std::string to_string(Command c);

/// Interpolated two-column table (pchip); zero beyond the last abscissa.
RadialFunction tabulated_function(const std::string& path);

Model build_model(const RunConfig& config);

/// Model, reference data and the run temperature resolved from a config.
struct RunContext {
  RunConfig config;
  Model model;
  ReferenceData reference;
  double temperature = 0.0;
  std::string config_hash;
};

RunContext prepare_run(const RunConfig& config);

/// Resonance input for rank-one potentials; DomainError otherwise.
ResonanceInput resonance_input(const RunContext& ctx);

/// Horizon from the config: t_end, or horizon / |T - T_c|.
double resolve_horizon(const RunContext& ctx);

EvolveConfig resolve_evolve_config(const RunContext& ctx, const BdGState& state0);

struct EvolveOutcome {
  std::vector<ObservablesRecord> records;
  std::vector<std::string> failures;
  double max_abs_psi_sq_deviation = 0.0;
  double max_pressure_drift = 0.0;
  double max_s_drift = 0.0;
  double max_eq10_residual = 0.0;
  double min_abs_psi = 0.0;
  EvolveConfig evolve;
  BdGState initial;
  BdGState final_state;
};

/// Nonlinear run from the configured initial state with full monitoring.
/// Snapshots at config.output.snapshot_times are written into snapshot_dir when given.
EvolveOutcome run_evolve(const RunContext& ctx, const std::optional<BdGState>& initial = std::nullopt,
                         const std::string& snapshot_dir = "");

struct LinearOutcome {
  std::vector<double> t;
  std::vector<std::complex<double>> psi;  // h^{-1} <alpha_*, alpha_t>
  ResonanceResult resonance;
  FitResult fit;                          // exponential fit of |psi| over [0, fit_window]
  double fit_window = 0.0;
  double decay_factor = 0.0;              // |psi(t_end)| / |psi(0)|
};

LinearOutcome run_linear(const RunContext& ctx, std::size_t samples = 400);

struct GlComparison {
  std::vector<TdglSample> tdgl;
  TdglParams params;
  double tdgl_final_ratio = 0.0;  // |psi_TDGL(t_end)| / |psi0|
  double bdg_max_deviation = 0.0;
  double bdg_min_abs_psi = 0.0;
  double bound = 0.0;             // C sqrt(h)
  bool tdgl_decayed = false;      // below 0.1 |psi0|
  bool bdg_within_bound = false;
  bool ordering = false;          // BdG magnitude stays above the TDGL floor throughout
};

GlComparison compare_gl(const RunContext& ctx, const EvolveOutcome& bdg, double decay_rate);

struct RunSummary {
  std::string command;
  nlohmann::json data;
  std::vector<std::string> failures;
  double wall_time = 0.0;

  bool invariants_ok() const { return failures.empty(); }
  nlohmann::json to_json() const;
};

/// Runs one command, writing CSV / JSON / snapshots into out_dir.
RunSummary run_experiment(const RunConfig& config, Command command, const std::string& out_dir);

}  // namespace bdg
