#include "bdg/state.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>

#include "bdg/errors.hpp"
#include "bdg/parallel.hpp"

namespace bdg {

namespace {

void require_positive_temperature(double temperature) {
  if (!(temperature > 0)) throw DomainError("temperature must be positive");
}

// 1 / (1 + exp(x)) without overflow.
double fermi(double x) {
  if (x > 0) {
    const double e = std::exp(-x);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(x));
}

// Occupation gamma of the thermal state of [[e, d], [d, -e]] with E = sqrt(e^2 + d^2).
// Written so the exponentially small side keeps full relative precision.
double thermal_gamma(double e, double d_sq, double energy, double temperature) {
  if (energy == 0.0) return 0.5;
  const double f = fermi(energy / temperature);
  const double ratio = std::abs(e) / energy;
  // (1/2)(1 - |e|/E) = d^2 / (2 E (E + |e|))
  const double minority = d_sq / (2.0 * energy * (energy + std::abs(e))) + ratio * f;
  return e >= 0 ? minority : 1.0 - minority;
}

// p ln p with the ln argument clamped to [1e-30, 1] and 0 ln 0 = 0.
double p_log_p(double p) {
  if (p <= 0.0) return 0.0;
  return p * std::log(std::clamp(p, 1e-30, 1.0));
}

// (1/2 + s) ln(1/2 + s) + (1/2 - s) ln(1/2 - s) from gamma and |alpha|^2,
// using min(gamma, 1 - gamma) so that tiny eigenvalues are resolved.
double neg_entropy_density(double gamma, double alpha_sq) {
  const double m = std::min(gamma, 1.0 - gamma);
  const double g = gamma - 0.5;
  const double s = std::sqrt(g * g + alpha_sq);
  const double lower = std::max(0.0, (m * (1.0 - m) - alpha_sq) / (0.5 + s));
  return p_log_p(0.5 + s) + p_log_p(lower);
}

}  // namespace

double fermi_tanh(double e, double temperature) {
  require_positive_temperature(temperature);
  return std::tanh(e / (2.0 * temperature));
}

double k_t(double e, double temperature) {
  require_positive_temperature(temperature);
  const double x = e / (2.0 * temperature);
  if (std::abs(x) < 1e-8) return 2.0 * temperature * (1.0 + x * x / 3.0);
  return e / std::tanh(x);
}

Eigen::VectorXd dispersion(const MomentumGrid& grid, double mu) {
  return grid.nodes.array().square() - mu;
}

BdGState gibbs_state(const Eigen::VectorXcd& delta, double temperature, const MomentumGrid& grid,
                     double mu) {
  require_positive_temperature(temperature);
  if (static_cast<std::size_t>(delta.size()) != grid.size())
    throw DomainError("gap field does not match grid");
  const Eigen::VectorXd eps = dispersion(grid, mu);
  BdGState state;
  state.gamma.resize(delta.size());
  state.alpha.resize(delta.size());
  parallel::for_each(grid.size(), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double d_sq = std::norm(delta[i]);
    const double energy = std::sqrt(eps[i] * eps[i] + d_sq);
    state.gamma[i] = thermal_gamma(eps[i], d_sq, energy, temperature);
    state.alpha[i] = energy == 0.0
                         ? std::complex<double>{}
                         : -delta[i] * (std::tanh(energy / (2.0 * temperature)) / (2.0 * energy));
  });
  return state;
}

BdGState normal_state(double temperature, const MomentumGrid& grid, double mu) {
  return gibbs_state(Eigen::VectorXcd::Zero(grid.nodes.size()), temperature, grid, mu);
}

BdGState complete_pairing(const Eigen::VectorXcd& alpha, double temperature,
                          const MomentumGrid& grid, double mu) {
  require_positive_temperature(temperature);
  if (static_cast<std::size_t>(alpha.size()) != grid.size())
    throw DomainError("pairing field does not match grid");
  const Eigen::VectorXd eps = dispersion(grid, mu);
  BdGState state;
  state.alpha = alpha;
  state.gamma.resize(alpha.size());
  for (Eigen::Index i = 0; i < alpha.size(); ++i) {
    const double a = std::abs(alpha[i]);
    if (!(a < 0.5)) throw InvariantViolation("pairing density |alpha| >= 1/2 cannot be completed");
    const double e = eps[i];
    if (a == 0.0) {
      state.gamma[i] = thermal_gamma(e, 0.0, std::abs(e), temperature);
      continue;
    }
    // |alpha| = D tanh(E / 2T) / (2E) is increasing in the gap magnitude D.
    auto pairing = [&](double d) {
      const double energy = std::sqrt(e * e + d * d);
      return d * std::tanh(energy / (2.0 * temperature)) / (2.0 * energy) - a;
    };
    double lo = 2.0 * a * k_t(e, temperature);
    if (pairing(lo) > 0) lo = 0.0;
    double hi = std::max(lo, 1e-300) * 2.0;
    while (pairing(hi) < 0) hi *= 2.0;
    boost::math::tools::eps_tolerance<double> tol(50);
    std::uintmax_t iters = 200;
    auto [d0, d1] = boost::math::tools::toms748_solve(pairing, lo, hi, tol, iters);
    const double d = 0.5 * (d0 + d1);
    state.gamma[i] = thermal_gamma(e, d * d, std::sqrt(e * e + d * d), temperature);
  }
  return state;
}

Eigen::VectorXd s_field(const BdGState& state) {
  Eigen::VectorXd s(state.gamma.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double g = state.gamma[i] - 0.5;
    s[i] = std::sqrt(g * g + std::norm(state.alpha[i]));
  }
  return s;
}

double admissibility_margin(const BdGState& state) {
  return -parallel::max(state.size(), -1.0, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double g = state.gamma[i] - 0.5;
    return g * g + std::norm(state.alpha[i]) - 0.25;
  });
}

void check_admissible(const BdGState& state, double tol) {
  if (state.alpha.size() != state.gamma.size()) throw InvariantViolation("state: size mismatch");
  for (Eigen::Index i = 0; i < state.gamma.size(); ++i) {
    if (!(state.gamma[i] >= -tol && state.gamma[i] <= 1.0 + tol))
      throw InvariantViolation("state: gamma outside [0, 1]");
  }
  if (admissibility_margin(state) < -tol)
    throw InvariantViolation("state: (gamma - 1/2)^2 + |alpha|^2 exceeds 1/4");
}

double pressure_difference(const BdGState& state, double temperature, const Model& model) {
  require_positive_temperature(temperature);
  const MomentumGrid& grid = model.grid;
  if (state.size() != grid.size()) throw DomainError("state does not match grid");
  check_admissible(state, 1e-10);
  const Eigen::VectorXd eps = dispersion(grid, model.mu);
  const BdGState normal = normal_state(temperature, grid, model.mu);

  const double local = parallel::sum<double>(grid.size(), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double kinetic = eps[i] * (state.gamma[i] - normal.gamma[i]);
    const double entropy = neg_entropy_density(state.gamma[i], std::norm(state.alpha[i])) -
                           neg_entropy_density(normal.gamma[i], 0.0);
    return grid.weights[i] * (kinetic + temperature * entropy);
  });
  const Eigen::VectorXcd delta = delta_from_alpha(model, state.alpha);
  const double interaction = 0.5 * inner(grid, state.alpha, delta).real();
  return local + interaction;
}

}  // namespace bdg
