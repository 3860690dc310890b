#pragma once

#include <Eigen/Core>

#include "bdg/grid.hpp"
#include "bdg/potential.hpp"

namespace bdg {

/// Translation-invariant BdG state with even gamma: the 2x2 matrix
/// Gamma(k) = [[gamma, alpha], [conj(alpha), 1 - gamma]] is fixed by (gamma, alpha).
struct BdGState {
  Eigen::VectorXd gamma;
  Eigen::VectorXcd alpha;

  std::size_t size() const { return static_cast<std::size_t>(gamma.size()); }
};

/// K_T = e / tanh(e / 2T), with the removable point e = 0 giving 2T. Requires T > 0.
double k_t(double e, double temperature);

/// tanh(e / 2T); the sign-safe T -> 0 limit is not supported (T > 0 required).
double fermi_tanh(double e, double temperature);

/// Kinetic energies e_i = k_i^2 - mu.
Eigen::VectorXd dispersion(const MomentumGrid& grid, double mu);

/// Thermal state of H = [[e, Delta], [conj(Delta), -e]]:
/// gamma = 1/2 - (e / 2E) tanh(E / 2T), alpha = -(Delta / 2E) tanh(E / 2T).
BdGState gibbs_state(const Eigen::VectorXcd& delta, double temperature, const MomentumGrid& grid,
                     double mu);

/// Fermi-Dirac occupation, no pairing.
BdGState normal_state(double temperature, const MomentumGrid& grid, double mu);

/// Pointwise minimizer of the kinetic-minus-entropy part of the pressure at
/// fixed alpha: the Gibbs state of a node-wise gap with |alpha| as its pairing
/// density. Admissible for any |alpha| < 1/2 and reduces to the normal state
/// where alpha = 0.
BdGState complete_pairing(const Eigen::VectorXcd& alpha, double temperature,
                          const MomentumGrid& grid, double mu);

/// s(k) = sqrt((gamma - 1/2)^2 + |alpha|^2); Gamma(k) has eigenvalues 1/2 +- s.
Eigen::VectorXd s_field(const BdGState& state);

/// min_k (1/4 - s^2); negative means inadmissible.
double admissibility_margin(const BdGState& state);

/// Throws InvariantViolation when gamma leaves [0, 1] or s exceeds 1/2 by more than tol.
void check_admissible(const BdGState& state, double tol = 1e-12);

/// F(Gamma) - F(Gamma_n) at temperature T, assembled from pointwise
/// differences against the normal state.
double pressure_difference(const BdGState& state, double temperature, const Model& model);

}  // namespace bdg
