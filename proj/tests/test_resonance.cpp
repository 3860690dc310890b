#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bdg/errors.hpp"
#include "bdg/resonance.hpp"
#include "bdg/state.hpp"
#include "bdg/config.hpp"

using namespace bdg;
using cd = std::complex<double>;

namespace {

constexpr double kTc = 0.2;  // reference Gaussian at mu = 1

GaussianFormFactor desk() { return GaussianFormFactor{kDeskAmplitude, 1.0}; }

ResonanceInput desk_input(double k_max = 0.0) {
  const GaussianFormFactor g = desk();
  return ResonanceInput{[g](double k) { return g(k); }, Dimension::ThreeDRadial, 1.0, k_max};
}

}  // namespace

TEST_CASE("leading order: structure") {
  const ResonanceInput in = desk_input();
  const ResonanceResult r = resonance_leading_order(in, kTc + 0.01, kTc);
  CHECK(r.method == ResonanceMethod::LeadingOrder);
  CHECK(r.lambda.imag() < 0);
  CHECK(std::abs(r.lambda - r.prefactor / cd(r.p, -r.q)) < 1e-15);

  // Fermi-surface weight in closed form: pi g(1) / 2, g = 4 pi phi(1)^2 / (2 T_c).
  const double phi1 = desk()(1.0);
  CHECK(r.q == doctest::Approx(std::numbers::pi * 4 * std::numbers::pi * phi1 * phi1 / (2 * kTc) / 2).epsilon(1e-12));

  // sech^2 weight against adaptive quadrature
  auto f = [&](double k) {
    const double phi = desk()(k);
    const double c = std::cosh((k * k - 1.0) / (2 * kTc));
    return 4 * std::numbers::pi * k * k * phi * phi / (c * c);
  };
  using boost::math::quadrature::gauss_kronrod;
  const double I = gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14) +
                   gauss_kronrod<double, 61>::integrate(f, 1.0, 6.0, 15, 1e-14);
  CHECK(r.prefactor == doctest::Approx(-0.01 / (kTc * kTc) * I).epsilon(1e-10));
}

TEST_CASE("leading order: linear in T - T_c") {
  const ResonanceInput in = desk_input();
  CHECK(std::abs(resonance_leading_order(in, kTc, kTc).lambda) == 0.0);
  const cd l1 = resonance_leading_order(in, kTc + 0.02, kTc).lambda;
  const cd l2 = resonance_leading_order(in, kTc + 0.01, kTc).lambda;
  CHECK(std::abs(l1 / l2 - 2.0) < 1e-3);
  const cd lm = resonance_leading_order(in, kTc - 0.01, kTc).lambda;
  CHECK(std::abs(lm + l2) < 1e-14);
  CHECK(lm.imag() > 0);
}

TEST_CASE("leading order: principal value is stable in the cutoff") {
  const ResonanceResult a = resonance_leading_order(desk_input(6.0), kTc + 0.01, kTc);
  const ResonanceResult b = resonance_leading_order(desk_input(8.0), kTc + 0.01, kTc);
  CHECK(std::abs(a.p - b.p) < 1e-6);
  CHECK(std::abs(a.q - b.q) < 1e-12);
}

TEST_CASE("leading order: one dimension") {
  const GaussianFormFactor g = desk();
  const ResonanceInput in{[g](double k) { return g(k); }, Dimension::OneD, 1.0, 0.0};
  const ResonanceResult r = resonance_leading_order(in, kTc + 0.01, kTc);
  const double phi1 = g(1.0);
  CHECK(r.q == doctest::Approx(std::numbers::pi * 2 * phi1 * phi1 / (2 * kTc) / 2).epsilon(1e-12));
  CHECK(r.lambda.imag() < 0);
}

TEST_CASE("leading order: errors") {
  ResonanceInput in = desk_input();
  in.phi = [](double k) { return (k - 1.0) * std::exp(-k * k); };
  CHECK_THROWS_AS(resonance_leading_order(in, kTc + 0.01, kTc), DomainError);
  CHECK_THROWS_AS(resonance_leading_order(desk_input(1.5), kTc + 0.01, kTc), DomainError);
  CHECK_THROWS_AS(resonance_leading_order(desk_input(), kTc + 0.01, 0.0), DomainError);
}

TEST_CASE("contour root") {
  const double T = kTc + 0.01;
  const ResonanceResult a = resonance_rootfind_gaussian(desk(), Dimension::ThreeDRadial, 1.0, T, kTc, cd(0, -0.1));
  const ResonanceResult b = resonance_rootfind_gaussian(desk(), Dimension::ThreeDRadial, 1.0, T, kTc, cd(0, -0.2));
  CHECK(a.method == ResonanceMethod::ComplexDilationRoot);
  CHECK(a.residual <= 1e-10);
  CHECK(std::abs(a.lambda - b.lambda) < 1e-6);
  CHECK(a.lambda.imag() < 0);
  // same sign and magnitude as the leading-order value
  const cd lo = resonance_leading_order(desk_input(), T, kTc).lambda;
  CHECK(std::abs(a.lambda / lo - 1.0) < 0.3);

  CHECK_THROWS_AS(resonance_rootfind_gaussian(desk(), Dimension::ThreeDRadial, 1.0, T, kTc, cd(0, 0.1)),
                  DomainError);
  CHECK_THROWS_AS(resonance_rootfind_gaussian(desk(), Dimension::ThreeDRadial, 1.0, T, kTc, cd(0, -0.5)),
                  DomainError);
}

TEST_CASE("contour root approaches the leading order as T -> T_c") {
  double prev = 1e300;
  for (double d : {0.02, 0.01, 0.005}) {
    const cd root =
        resonance_rootfind_gaussian(desk(), Dimension::ThreeDRadial, 1.0, kTc + d, kTc, cd(0, -0.1)).lambda;
    const cd lo = resonance_leading_order(desk_input(), kTc + d, kTc).lambda;
    const double err = std::abs(root / lo - 1.0);
    CHECK(err < prev);
    prev = err;
  }
}

TEST_CASE("decay timescale") {
  const ResonanceResult r = resonance_leading_order(desk_input(), kTc + 0.01, kTc);
  CHECK(predicted_decay_timescale(r) == doctest::Approx(1.0 / std::abs(r.lambda.imag())));
  const ResonanceResult below = resonance_leading_order(desk_input(), kTc - 0.01, kTc);
  CHECK_THROWS_AS(predicted_decay_timescale(below), DomainError);
  CHECK(to_string(ResonanceMethod::LeadingOrder) != to_string(ResonanceMethod::ComplexDilationRoot));
}
