#include "bdg/linear_model.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "bdg/errors.hpp"
#include "bdg/spectral.hpp"
#include "bdg/state.hpp"

namespace bdg {

LinearModel build_linear_model(const Model& model, double temperature) {
  if (!(temperature > 0)) throw DomainError("temperature must be positive");
  LinearModel lm;
  lm.temperature = temperature;
  lm.sqrt_weights = model.grid.weights.cwiseSqrt();
  lm.s_matrix = assemble_kt_plus_v(model, temperature);
  const Eigen::VectorXd eps = dispersion(model.grid, model.mu);
  lm.l_diag = eps.unaryExpr([&](double e) { return 2.0 * fermi_tanh(e, temperature); });

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> s_eig(lm.s_matrix);
  if (s_eig.info() != Eigen::Success) throw NonConvergence("eigensolver failed on S", 0.0);
  const Eigen::VectorXd sv = s_eig.eigenvalues();
  if (!(sv[0] > 0)) throw DomainError("linear model requires T > T_c (S is not positive definite)");
  const Eigen::MatrixXd& v = s_eig.eigenvectors();
  lm.s_half = v * sv.cwiseSqrt().asDiagonal() * v.transpose();
  lm.s_half_inv = v * sv.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();

  Eigen::MatrixXd generator = lm.s_half * lm.l_diag.asDiagonal() * lm.s_half;
  generator = 0.5 * (generator + generator.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> g_eig(generator);
  if (g_eig.info() != Eigen::Success) throw NonConvergence("eigensolver failed on S^1/2 L S^1/2", 0.0);
  lm.frequencies = g_eig.eigenvalues();
  lm.modes = g_eig.eigenvectors();
  return lm;
}

Eigen::VectorXcd propagate_symmetrized(const Eigen::VectorXcd& y, const LinearModel& lm, double t) {
  Eigen::VectorXcd c = lm.modes.transpose().cast<std::complex<double>>() * y;
  for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::polar(1.0, -lm.frequencies[j] * t);
  return lm.modes.cast<std::complex<double>>() * c;
}

Eigen::VectorXcd linear_evolve(const Eigen::VectorXcd& alpha0, const LinearModel& lm, double t) {
  if (alpha0.size() != lm.sqrt_weights.size()) throw DomainError("field does not match linear model");
  if (t == 0.0) return alpha0;
  const Eigen::VectorXcd x0 = lm.sqrt_weights.cast<std::complex<double>>().cwiseProduct(alpha0);
  const Eigen::VectorXcd y0 = lm.s_half.cast<std::complex<double>>() * x0;
  const Eigen::VectorXcd xt = lm.s_half_inv.cast<std::complex<double>>() * propagate_symmetrized(y0, lm, t);
  return xt.cwiseQuotient(lm.sqrt_weights.cast<std::complex<double>>());
}

LinearOverlap::LinearOverlap(const LinearModel& lm, const Eigen::VectorXd& probe,
                             const Eigen::VectorXcd& alpha0)
    : frequencies_(lm.frequencies) {
  const Eigen::VectorXd left = lm.modes.transpose() * (lm.s_half_inv * lm.sqrt_weights.cwiseProduct(probe));
  const Eigen::VectorXcd x0 = lm.sqrt_weights.cast<std::complex<double>>().cwiseProduct(alpha0);
  const Eigen::VectorXcd right =
      lm.modes.transpose().cast<std::complex<double>>() * (lm.s_half.cast<std::complex<double>>() * x0);
  coefficients_ = left.cast<std::complex<double>>().cwiseProduct(right);
}

std::complex<double> LinearOverlap::operator()(double t) const {
  std::complex<double> acc{};
  for (Eigen::Index j = 0; j < frequencies_.size(); ++j)
    acc += coefficients_[j] * std::polar(1.0, -frequencies_[j] * t);
  return acc;
}

}  // namespace bdg
