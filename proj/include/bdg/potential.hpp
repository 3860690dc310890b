#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <string>
#include <variant>

#include <Eigen/Core>

#include "bdg/grid.hpp"

namespace bdg {

using RadialFunction = std::function<double(double)>;

/// V(x) = -g delta(x) in one dimension.
struct Contact1D {
  double coupling = 0.0;
};

struct GaussianFormFactor {
  double amplitude = 1.0;
  double width = 1.0;  // phi(k) = amplitude * exp(-k^2 / (2 width^2))
  double operator()(double k) const;
};

/// V = -|phi><phi| with a real radial momentum-space form factor.
struct SeparableRankOne {
  RadialFunction profile;                   // phi(k) off the grid
  Eigen::VectorXd values;                   // phi(k_i)
  std::optional<GaussianFormFactor> gaussian;
};

/// Local radial potential, stored through its angular-averaged kernel:
/// (V alpha)(k_i) = sum_j kernel(i, j) w_j alpha(k_j).
struct LocalRadial {
  RadialFunction v_hat;
  Eigen::MatrixXd kernel;
};

using Potential = std::variant<Contact1D, SeparableRankOne, LocalRadial>;

/// The model a run is defined on: grid, interaction and chemical potential.
struct Model {
  MomentumGrid grid;
  Potential potential;
  double mu = 1.0;
};

SeparableRankOne make_rank_one(const RadialFunction& profile, const MomentumGrid& grid);
SeparableRankOne make_gaussian_rank_one(double amplitude, double width, const MomentumGrid& grid);

// Builds the kernel from G(q) = int_0^q v_hat(s) s ds, which gives the angular
// average in closed form: (1/2) int_{-1}^{1} v_hat(|k - k'|) dc = (G(k+k') - G(|k-k'|)) / (2 k k').
LocalRadial make_local_radial(const RadialFunction& v_hat, const MomentumGrid& grid);

// Rank-one view of Contact1D and SeparableRankOne: V = -|u><u| with u sampled
// on the grid. Empty optional for LocalRadial.
std::optional<Eigen::VectorXd> rank_one_vector(const Potential& potential,
                                               const MomentumGrid& grid);

std::string potential_name(const Potential& potential);

// Weighted grid inner product <f, g> = sum_i w_i conj(f_i) g_i.
std::complex<double> inner(const MomentumGrid& grid, const Eigen::VectorXd& f,
                           const Eigen::VectorXcd& g);
std::complex<double> inner(const MomentumGrid& grid, const Eigen::VectorXcd& f,
                           const Eigen::VectorXcd& g);
double weighted_norm(const MomentumGrid& grid, const Eigen::VectorXcd& f);
double weighted_norm(const MomentumGrid& grid, const Eigen::VectorXd& f);

/// (V alpha)^ in momentum space.
Eigen::VectorXcd apply_potential(const Model& model, const Eigen::VectorXcd& alpha);

/// Gap field Delta = 2 (V alpha)^ = 2 (2 pi)^{-d/2} (V_hat * alpha_hat).
Eigen::VectorXcd delta_from_alpha(const Model& model, const Eigen::VectorXcd& alpha);

}  // namespace bdg
