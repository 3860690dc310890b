#pragma once

#include <complex>
#include <cstddef>
#include <utility>

#include <Eigen/Core>

#include "bdg/potential.hpp"
#include "bdg/state.hpp"

namespace bdg {

/// Frozen equilibrium context of a run: the critical temperature and the
/// normalized zero mode of K_{T_c} + V.
struct ReferenceData {
  double critical_temperature = 0.0;
  Eigen::VectorXd alpha_star;  // unit weighted norm, sign fixed by a positivity probe
  double spectral_gap = 0.0;   // second eigenvalue of K_{T_c} + V
  double mu = 0.0;
  double eigen_residual = 0.0;
  double scalar_condition = 0.0;  // <phi, K_{T_c}^{-1} phi> on the grid (rank-one only, else NaN)
};

/// K_T + V in the weight-symmetrized basis x_i = sqrt(w_i) f_i. Exactly symmetric.
Eigen::MatrixXd assemble_kt_plus_v(const Model& model, double temperature);

struct Eigenpair {
  double value = 0.0;
  Eigen::VectorXd vector;  // field values f_i (unit weighted norm)
  double second_value = 0.0;
  double residual = 0.0;   // ||M x - value x|| in the symmetrized basis
};

/// Lowest eigenpair of K_T + V. Rank-one potentials use the secular equation
/// of the diagonal-plus-rank-one matrix; LocalRadial uses a dense solver.
Eigenpair lowest_eigenpair(const Model& model, double temperature);

/// Lowest eigenvalue only (cheap path for root bracketing).
double lowest_eigenvalue(const Model& model, double temperature);

struct TcOptions {
  double t_lo = 1e-4;
  double t_hi = 0.0;  // 0 -> mu
  double bisection_rtol = 1e-3;
  double secant_rtol = 1e-10;
  double gap_tolerance = 1e-12;
};

/// T_c as the zero of the (strictly increasing) lowest eigenvalue of K_T + V.
ReferenceData critical_temperature(const Model& model, const TcOptions& options = {});

struct GapSolution {
  Eigen::VectorXcd delta;
  BdGState state;
  std::size_t iterations = 0;
  double residual = 0.0;
};

struct GapOptions {
  double damping = 0.5;
  double rtol = 1e-10;
  std::size_t max_iterations = 10000;
};

/// Damped fixed-point iteration Delta <- Delta[gibbs_state(Delta)].
GapSolution gap_equation_solve(const Model& model, double temperature,
                               const Eigen::VectorXcd& delta_init, const GapOptions& options = {});

enum class InitialKind { PerturbedNormal, ScaledEquilibrium };

InitialKind initial_kind_from_string(const std::string& s);
std::string to_string(InitialKind kind);

/// Initial states with psi(0) = psi0 exactly:
///  PerturbedNormal   alpha = h psi0 alpha_*,
///  ScaledEquilibrium alpha = c alpha_eq with <alpha_*, c alpha_eq> = h psi0.
/// gamma is the pressure-minimizing completion at fixed alpha, which is the
/// normal state where alpha vanishes and the equilibrium gamma when c = 1.
BdGState build_initial_state(InitialKind kind, std::complex<double> psi0, double h,
                             const ReferenceData& reference, const Model& model, double temperature);

}  // namespace bdg
