#include "bdg/resonance.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdg/errors.hpp"
#include "bdg/state.hpp"

namespace bdg {

namespace {

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 61>;
constexpr double kQuadTol = 1e-12;
constexpr unsigned kMaxDepth = 15;

template <class T>
T radial_measure(Dimension dim, T k) {
  if (dim == Dimension::ThreeDRadial) return 4.0 * std::numbers::pi * k * k;
  return T(2.0);  // both signs of k
}

// Panels break at the Fermi momentum, at k_F +- window and at 2 k_F.
template <class F>
auto integrate_split(F f, double k_f, double r_max, double window = 0.0) {
  if (window > 0)
    return Kronrod::integrate(f, 0.0, k_f - window, kMaxDepth, kQuadTol) +
           Kronrod::integrate(f, k_f - window, k_f + window, kMaxDepth, kQuadTol) +
           Kronrod::integrate(f, k_f + window, 2.0 * k_f, kMaxDepth, kQuadTol) +
           Kronrod::integrate(f, 2.0 * k_f, r_max, kMaxDepth, kQuadTol);
  return Kronrod::integrate(f, 0.0, k_f, kMaxDepth, kQuadTol) +
         Kronrod::integrate(f, k_f, 2.0 * k_f, kMaxDepth, kQuadTol) +
         Kronrod::integrate(f, 2.0 * k_f, r_max, kMaxDepth, kQuadTol);
}

}  // namespace

std::string to_string(ResonanceMethod m) {
  return m == ResonanceMethod::LeadingOrder ? "leading-order" : "complex-dilation-root";
}

ResonanceResult resonance_leading_order(const ResonanceInput& input, double temperature, double tc) {
  if (!(input.mu > 0)) throw DomainError("mu must be positive");
  if (!(tc > 0)) throw DomainError("T_c must be positive");
  const double mu = input.mu;
  const double k_f = std::sqrt(mu);
  const double r_max = input.k_max > 0 ? input.k_max : 6.0 * k_f;
  if (!(r_max > 2.0 * k_f)) throw DomainError("k_max must exceed 2 sqrt(mu)");
  const auto& phi = input.phi;
  const Dimension dim = input.dimension;

  if (!(std::abs(phi(k_f)) > 1e-12)) throw DomainError("Q ~ 0, resonance formula degenerate");

  auto g = [&](double k) { return radial_measure(dim, k) * phi(k) * phi(k) / k_t(k * k - mu, tc); };
  const double g_f = g(k_f);
  const double g1 = boost::math::differentiation::finite_difference_derivative(g, k_f);
  const double g2 = boost::math::differentiation::finite_difference_derivative(
      [&](double k) { return boost::math::differentiation::finite_difference_derivative(g, k); }, k_f);

  // (g(k) - g(k_F)) / (k^2 - mu), by Taylor series next to the pole.
  const double window = 1e-3 * k_f;
  auto subtracted = [&](double k) {
    const double d = k - k_f;
    if (std::abs(d) < window) return (g1 + 0.5 * g2 * d) / (2.0 * k_f + d);
    return (g(k) - g_f) / (k * k - mu);
  };
  const double pv_pole = std::log(std::abs((r_max - k_f) / (r_max + k_f))) / (2.0 * k_f);

  ResonanceResult out;
  out.method = ResonanceMethod::LeadingOrder;
  out.p = integrate_split(subtracted, k_f, r_max, window) + g_f * pv_pole;
  out.q = std::numbers::pi * g_f / (2.0 * k_f);
  const double weight = integrate_split(
      [&](double k) {
        const double c = std::cosh((k * k - mu) / (2.0 * tc));
        return radial_measure(dim, k) * phi(k) * phi(k) / (c * c);
      },
      k_f, r_max);
  out.prefactor = (tc - temperature) / (tc * tc) * weight;
  out.lambda = out.prefactor / std::complex<double>(out.p, -out.q);
  return out;
}

ResonanceResult resonance_rootfind_gaussian(const GaussianFormFactor& phi, Dimension dimension,
                                            double mu, double temperature, double tc,
                                            std::complex<double> theta, double r_max) {
  if (!(temperature > 0)) throw DomainError("temperature must be positive");
  const double k_f = std::sqrt(mu);
  if (r_max <= 0) r_max = 12.0 * k_f;
  const double beta = -theta.imag();
  if (!(beta > 0)) throw DomainError("Im theta must be negative: increase |Im theta|");
  // tanh((k^2 - mu) / 2T) has poles at k^2 = mu + i pi T (2n + 1); the sector
  // swept by the rotated contour must not reach the first one.
  if (!(2.0 * beta < std::atan(std::numbers::pi * temperature / mu)))
    throw DomainError("Im theta crosses a thermal pole: decrease |Im theta|");

  const std::complex<double> rot = std::exp(-theta);
  const double w2 = 2.0 * phi.width * phi.width;
  auto f = [&](std::complex<double> lambda) {
    auto integrand = [&](double r) {
      const std::complex<double> k = rot * r;
      const std::complex<double> k2 = k * k;
      const std::complex<double> ff = phi.amplitude * phi.amplitude * std::exp(-2.0 * k2 / w2);
      return radial_measure(dimension, k) * ff * 2.0 * std::tanh((k2 - mu) / (2.0 * temperature)) /
             (2.0 * k2 - 2.0 * mu + lambda) * rot;
    };
    return 1.0 - integrate_split(integrand, k_f, r_max);
  };
  auto check_pole = [&](std::complex<double> lambda) {
    // The resolvent pole k^2 = mu - lambda / 2 must lie inside the swept sector.
    const double angle = std::arg(mu - 0.5 * lambda);
    if (angle > 0.9 * 2.0 * beta) throw DomainError("resolvent pole close to the contour: increase |Im theta|");
  };

  ResonanceInput lead_input{phi, dimension, mu, 0.0};
  ResonanceResult out = resonance_leading_order(lead_input, temperature, tc);
  out.method = ResonanceMethod::ComplexDilationRoot;
  out.theta = theta;

  std::complex<double> l0 = out.lambda;
  std::complex<double> l1 = l0 + 1e-3 * (std::abs(l0) + 1e-8) * std::complex<double>(1.0, -1.0);
  check_pole(l0);
  std::complex<double> f0 = f(l0), f1 = f(l1);
  for (std::size_t it = 1; it <= 100; ++it) {
    out.iterations = it;
    if (std::abs(f1) <= 1e-10) break;
    if (f1 == f0 || !std::isfinite(std::abs(f1))) throw NonConvergence("resonance secant diverged", std::abs(f1));
    const std::complex<double> l2 = l1 - f1 * (l1 - l0) / (f1 - f0);
    l0 = l1;
    f0 = f1;
    l1 = l2;
    check_pole(l1);
    f1 = f(l1);
  }
  if (!(std::abs(f1) <= 1e-10)) throw NonConvergence("resonance secant did not converge", std::abs(f1));
  out.lambda = l1;
  out.residual = std::abs(f1);
  return out;
}

double predicted_decay_timescale(const ResonanceResult& result) {
  if (!(result.lambda.imag() < 0)) throw DomainError("Im lambda >= 0: no decay");
  return 1.0 / std::abs(result.lambda.imag());
}

}  // namespace bdg
