#include "bdg/dynamics.hpp"

#include <cmath>
#include <sstream>

#include "bdg/errors.hpp"
#include "bdg/parallel.hpp"

namespace bdg {

HamiltonianField hamiltonian_field(const BdGState& state, const Model& model) {
  if (state.size() != model.grid.size()) throw DomainError("state does not match grid");
  return {dispersion(model.grid, model.mu), delta_from_alpha(model, state.alpha)};
}

double max_quasiparticle_energy(const BdGState& state, const Model& model) {
  const HamiltonianField h = hamiltonian_field(state, model);
  return parallel::max(state.size(), 0.0, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    return std::sqrt(h.epsilon[i] * h.epsilon[i] + std::norm(h.delta[i]));
  });
}

std::pair<double, std::complex<double>> unitary_step_2x2(double gamma, std::complex<double> alpha,
                                                         double epsilon, std::complex<double> delta,
                                                         double dt) {
  const double energy = std::sqrt(epsilon * epsilon + std::norm(delta));
  const double phase = energy * dt;
  const double c = std::cos(phase);
  // sin(E dt) / E, with the E -> 0 limit dt
  const double sinc = std::abs(phase) > 1e-8 ? std::sin(phase) / energy : dt * (1.0 - phase * phase / 6.0);
  const double c2 = 1.0 - 2.0 * sinc * sinc * energy * energy;  // cos(2 E dt)
  const double g = gamma - 0.5;
  const std::complex<double> cross = std::conj(delta) * alpha;
  // Increment of gamma written without the cos(2 E dt) - 1 cancellation.
  const double dg = 2.0 * sinc * sinc * (epsilon * cross.real() - std::norm(delta) * g) -
                    2.0 * c * sinc * cross.imag();
  const double p = epsilon * g + cross.real();
  const std::complex<double> i_unit(0.0, 1.0);
  const std::complex<double> a = c2 * alpha + 2.0 * sinc * sinc * p * delta +
                                 i_unit * (c * sinc) * (2.0 * g * delta - 2.0 * epsilon * alpha);
  return {gamma + dg, a};
}

void unitary_step(const BdGState& in, const Eigen::VectorXd& epsilon, const Eigen::VectorXcd& delta,
                  double dt, BdGState& out) {
  out.gamma.resize(in.gamma.size());
  out.alpha.resize(in.alpha.size());
  parallel::for_each(in.size(), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const auto [g, a] = unitary_step_2x2(in.gamma[i], in.alpha[i], epsilon[i], delta[i], dt);
    out.gamma[i] = g;
    out.alpha[i] = a;
  });
}

EvolveResult evolve_nonlinear(const BdGState& state0, const Model& model, const EvolveConfig& config,
                              const Observer& observer) {
  if (!(config.dt > 0)) throw DomainError("dt must be positive");
  if (!(config.t_end >= 0)) throw DomainError("t_end must be nonnegative");
  if (config.observe_every == 0) throw DomainError("observe_every must be positive");
  if (config.midpoint_iters < 0) throw DomainError("midpoint_iters must be nonnegative");
  check_admissible(state0, 1e-12);
  const double e_max = max_quasiparticle_energy(state0, model);
  if (config.dt * e_max > kMaxPhaseStep) {
    std::ostringstream msg;
    msg << "dt * max E = " << config.dt * e_max << " exceeds " << kMaxPhaseStep;
    throw DomainError(msg.str());
  }

  const Eigen::VectorXd epsilon = dispersion(model.grid, model.mu);
  const auto steps = static_cast<std::size_t>(std::llround(std::ceil(config.t_end / config.dt - 1e-9)));

  EvolveResult result;
  result.state = state0;
  BdGState trial = state0;
  Eigen::VectorXcd delta = delta_from_alpha(model, state0.alpha);
  if (observer) observer(0.0, result.state, delta);

  for (std::size_t n = 1; n <= steps; ++n) {
    const double t = static_cast<double>(n) * config.dt;
    unitary_step(result.state, epsilon, delta, config.dt, trial);
    for (int it = 0; it < config.midpoint_iters; ++it) {
      const Eigen::VectorXcd mid = 0.5 * (delta + delta_from_alpha(model, trial.alpha));
      unitary_step(result.state, epsilon, mid, config.dt, trial);
    }
    std::swap(result.state, trial);
    delta = delta_from_alpha(model, result.state.alpha);

    const double margin = admissibility_margin(result.state);
    if (margin < -1e-8) {
      std::ostringstream msg;
      msg << "admissibility lost at t = " << t << " (margin " << margin << ")";
      throw InvariantViolation(msg.str());
    }
    result.t = t;
    result.steps = n;
    if (observer && (n % config.observe_every == 0 || n == steps)) observer(t, result.state, delta);
  }
  return result;
}

}  // namespace bdg
