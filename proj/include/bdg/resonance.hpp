#pragma once

#include <complex>
#include <cstddef>
#include <string>

#include "bdg/grid.hpp"
#include "bdg/potential.hpp"

namespace bdg {

enum class ResonanceMethod { LeadingOrder, ComplexDilationRoot };

std::string to_string(ResonanceMethod m);

struct ResonanceResult {
  std::complex<double> lambda;
  ResonanceMethod method = ResonanceMethod::LeadingOrder;
  std::complex<double> theta;  // root-finder only
  double p = 0.0;              // principal value integral
  double q = 0.0;              // Fermi-surface weight
  double prefactor = 0.0;      // (T_c - T) / T_c^2 * int |phi|^2 cosh^-2(eps / 2 T_c)
  std::size_t iterations = 0;
  double residual = 0.0;
};

/// Rank-one form factor data for the resonance computations.
struct ResonanceInput {
  RadialFunction phi;
  Dimension dimension = Dimension::ThreeDRadial;
  double mu = 1.0;
  double k_max = 0.0;  // 0 -> 6 sqrt(mu)
};

/// Leading order in T - T_c:
/// lambda = (T_c - T) / T_c^2 * I / (P - i Q), I = int |phi|^2 cosh^-2(eps / 2 T_c),
/// P = p.v. int |phi|^2 / (eps K_{T_c}), Q = pi g(k_F) / (2 k_F) with g = |phi|^2 / K_{T_c}
/// times the radial measure. Im lambda < 0 for T > T_c.
ResonanceResult resonance_leading_order(const ResonanceInput& input, double temperature, double tc);

/// Complex root of 1 = int phi_theta^2 2 tanh(eps_theta / 2T) / (2 k_theta^2 - 2 mu + lambda)
/// along the rotated contour k = e^{-theta} r, seeded by the leading-order value.
ResonanceResult resonance_rootfind_gaussian(const GaussianFormFactor& phi, Dimension dimension,
                                            double mu, double temperature, double tc,
                                            std::complex<double> theta, double r_max = 0.0);

/// 1 / |Im lambda|; throws DomainError when Im lambda >= 0.
double predicted_decay_timescale(const ResonanceResult& result);

}  // namespace bdg
