#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <utility>

#include <Eigen/Core>

#include "bdg/potential.hpp"
#include "bdg/state.hpp"

namespace bdg {

struct EvolveConfig {
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t observe_every = 1;  // in steps
  int midpoint_iters = 2;
};

/// Largest dt * E(k) accepted by evolve_nonlinear.
inline constexpr double kMaxPhaseStep = 0.5;

struct HamiltonianField {
  Eigen::VectorXd epsilon;
  Eigen::VectorXcd delta;
};

/// H(k) = [[eps, Delta], [conj(Delta), -eps]] for the current state.
HamiltonianField hamiltonian_field(const BdGState& state, const Model& model);

/// max_k sqrt(eps^2 + |Delta|^2) for the state's own gap field.
double max_quasiparticle_energy(const BdGState& state, const Model& model);

/// Gamma -> U Gamma U^dagger with U = exp(-i dt H) for one momentum.
std::pair<double, std::complex<double>> unitary_step_2x2(double gamma, std::complex<double> alpha,
                                                         double epsilon, std::complex<double> delta,
                                                         double dt);

/// Field version of unitary_step_2x2 (frozen epsilon and Delta).
void unitary_step(const BdGState& in, const Eigen::VectorXd& epsilon, const Eigen::VectorXcd& delta,
                  double dt, BdGState& out);

/// Called with (t, state, Delta(state)) at t = 0, every observe_every steps and at t_end.
using Observer = std::function<void(double, const BdGState&, const Eigen::VectorXcd&)>;

struct EvolveResult {
  BdGState state;
  double t = 0.0;
  std::size_t steps = 0;
};

/// Nonlinear BdG flow with exact per-k conjugations and a midpoint-averaged
/// gap field. Throws InvariantViolation if 1/4 - s^2 drops below -1e-8.
EvolveResult evolve_nonlinear(const BdGState& state0, const Model& model, const EvolveConfig& config,
                              const Observer& observer = {});

}  // namespace bdg
