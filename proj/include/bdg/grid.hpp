#pragma once

#include <cstddef>
#include <string>

#include <Eigen/Core>

namespace bdg {

enum class Dimension { OneD, ThreeDRadial };

std::string to_string(Dimension d);
Dimension dimension_from_string(const std::string& s);

/// Quadrature over momentum space.
///
/// ThreeDRadial: nodes are |k| in (0, k_max], weights carry 4 pi k^2 dk, so
/// sum_i w_i f(k_i) approximates the integral of a radial f over the ball.
/// OneD: nodes are signed momenta symmetric about 0, weights carry dk.
struct MomentumGrid {
  Dimension dimension = Dimension::ThreeDRadial;
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
  double k_max = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(nodes.size()); }

  // Measure of the integration domain (ball volume or interval length).
  double domain_measure() const;
};

struct GridSpec {
  std::size_t n = 2048;
  double k_max = 0.0;        // 0 -> 6 sqrt(mu)
  double clustering = 12.0;  // sinh-map stretch; larger packs more nodes at the Fermi momentum
  int panel_order = 16;      // Gauss-Legendre points per panel

  bool operator==(const GridSpec&) const = default;
};

// Composite Gauss-Legendre panels in a stretched coordinate u in [0, 1],
// k(u) = k_F + a sinh(b (u - u0)), which concentrates nodes near k_F = sqrt(mu).
// For OneD the positive half is built this way and mirrored.
MomentumGrid make_grid(Dimension dim, double mu, const GridSpec& spec);

// Throws InvariantViolation if weights/nodes break the grid invariants.
void validate(const MomentumGrid& grid);

// sum_i w_i f_i
double integrate(const MomentumGrid& grid, const Eigen::VectorXd& f);

}  // namespace bdg
