#pragma once

#include <complex>
#include <vector>

#include <Eigen/Core>

#include "bdg/potential.hpp"

namespace bdg {

/// Linearization of the BdG flow around the normal state above T_c:
/// i d/dt alpha = L S alpha, S = K_T + V, L = 2 tanh(eps / 2T).
/// All matrices act on the weight-symmetrized coordinates x = sqrt(w) alpha.
struct LinearModel {
  double temperature = 0.0;
  Eigen::VectorXd sqrt_weights;
  Eigen::MatrixXd s_matrix;
  Eigen::VectorXd l_diag;
  Eigen::MatrixXd s_half;      // S^{1/2}
  Eigen::MatrixXd s_half_inv;  // S^{-1/2}
  Eigen::VectorXd frequencies; // spectrum of S^{1/2} L S^{1/2}
  Eigen::MatrixXd modes;       // its orthonormal eigenvectors
};

/// Throws DomainError if S is not positive definite (T <= T_c).
LinearModel build_linear_model(const Model& model, double temperature);

/// alpha_t = S^{-1/2} exp(-i t S^{1/2} L S^{1/2}) S^{1/2} alpha_0, exact in t.
Eigen::VectorXcd linear_evolve(const Eigen::VectorXcd& alpha0, const LinearModel& lm, double t);

/// exp(-i t S^{1/2} L S^{1/2}) y in the symmetrized coordinates.
Eigen::VectorXcd propagate_symmetrized(const Eigen::VectorXcd& y, const LinearModel& lm, double t);

/// <f, alpha_t> as a sum over modes, O(N) per time after an O(N^2) setup.
class LinearOverlap {
 public:
  LinearOverlap(const LinearModel& lm, const Eigen::VectorXd& probe, const Eigen::VectorXcd& alpha0);
  std::complex<double> operator()(double t) const;

 private:
  Eigen::VectorXd frequencies_;
  Eigen::VectorXcd coefficients_;
};

}  // namespace bdg
