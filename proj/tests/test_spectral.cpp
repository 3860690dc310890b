#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/roots.hpp>

#include "bdg/errors.hpp"
#include "bdg/spectral.hpp"
#include "fixtures.hpp"

using namespace bdg;

namespace {

// <phi, K_T^{-1} phi> on the continuum, for phi(k) = A exp(-k^2/2), mu = 1.
double scalar_condition_oracle(double amplitude, double T) {
  using boost::math::quadrature::gauss_kronrod;
  auto f = [&](double k) {
    const double phi = amplitude * std::exp(-k * k / 2);
    return 4 * std::numbers::pi * k * k * phi * phi / k_t(k * k - 1.0, T);
  };
  double err = 0;
  return gauss_kronrod<double, 61>::integrate(f, 0.0, 1.0, 15, 1e-14, &err) +
         gauss_kronrod<double, 61>::integrate(f, 1.0, 2.0, 15, 1e-14, &err) +
         gauss_kronrod<double, 61>::integrate(f, 2.0, 12.0, 15, 1e-14, &err);
}

double tc_oracle(double amplitude) {
  auto g = [&](double T) { return scalar_condition_oracle(amplitude, T) - 1.0; };
  boost::math::tools::eps_tolerance<double> tol(50);
  std::uintmax_t it = 200;
  const auto r = boost::math::tools::toms748_solve(g, 0.05, 0.5, tol, it);
  return 0.5 * (r.first + r.second);
}

}  // namespace

TEST_CASE("assembled matrix is exactly symmetric") {
  const Model m = fixtures::gaussian_model(256);
  const Eigen::MatrixXd M = assemble_kt_plus_v(m, 0.2);
  CHECK((M - M.transpose()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("V = 0: lowest eigenvalue is the smallest K_T") {
  Model m = fixtures::gaussian_model(256);
  m.potential = make_local_radial([](double) { return 0.0; }, m.grid);
  const double T = 0.1;
  const Eigen::VectorXd eps = dispersion(m.grid, m.mu);
  double smallest = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < eps.size(); ++i) smallest = std::min(smallest, k_t(eps[i], T));
  CHECK(lowest_eigenvalue(m, T) == doctest::Approx(smallest).epsilon(1e-12));
  CHECK(smallest >= 2 * T);
}

TEST_CASE("secular path matches the dense eigensolver") {
  const Model m = fixtures::gaussian_model(256);
  for (double T : {0.1, 0.2, 0.35}) {
    const Eigen::MatrixXd M = assemble_kt_plus_v(m, T);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M, Eigen::EigenvaluesOnly);
    const Eigenpair p = lowest_eigenpair(m, T);
    CHECK(p.value == doctest::Approx(es.eigenvalues()[0]).epsilon(1e-10));
    CHECK(p.residual < 1e-10);
    CHECK(weighted_norm(m.grid, p.vector) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("lowest eigenvalue increases with temperature") {
  const Model m = fixtures::gaussian_model(512);
  double prev = -std::numeric_limits<double>::infinity();
  for (double T = 0.05; T <= 0.6; T += 0.05) {
    const double v = lowest_eigenvalue(m, T);
    CHECK(v > prev);
    prev = v;
  }
}

TEST_CASE("T_c for the reference Gaussian") {
  const Model m = fixtures::gaussian_model(2048);
  const ReferenceData ref = critical_temperature(m);
  const double oracle = tc_oracle(kDeskAmplitude);
  CHECK(std::abs(ref.critical_temperature - oracle) < 1e-6);
  CHECK(std::abs(ref.critical_temperature - 0.2) < 1e-6);
  CHECK(std::abs(ref.scalar_condition - 1.0) < 1e-9);
  CHECK(std::abs(lowest_eigenvalue(m, ref.critical_temperature)) < 1e-9);
  CHECK(ref.spectral_gap > 1e-3);

  const ReferenceData fine = critical_temperature(fixtures::gaussian_model(4096));
  CHECK(std::abs(fine.critical_temperature - ref.critical_temperature) < 1e-6);
}

TEST_CASE("alpha_* is the normalized zero mode") {
  const Model m = fixtures::gaussian_model(1024);
  const ReferenceData ref = critical_temperature(m);
  CHECK(weighted_norm(m.grid, ref.alpha_star) == doctest::Approx(1.0).epsilon(1e-12));
  // (K_{T_c} + V) alpha_* = 0 on the grid
  const Eigen::VectorXd eps = dispersion(m.grid, m.mu);
  Eigen::VectorXcd a = ref.alpha_star.cast<std::complex<double>>();
  Eigen::VectorXcd r = apply_potential(m, a);
  for (Eigen::Index i = 0; i < r.size(); ++i) r[i] += k_t(eps[i], ref.critical_temperature) * a[i];
  CHECK(r.cwiseAbs().maxCoeff() < 1e-8);
  // sign convention: positive overlap with the form factor
  const auto& u = std::get<SeparableRankOne>(m.potential).values;
  CHECK(m.grid.weights.dot(u.cwiseProduct(ref.alpha_star)) > 0);
}

TEST_CASE("contact potential in one dimension converges under refinement") {
  const ReferenceData a = critical_temperature(fixtures::contact_model(2048, 0.5));
  const ReferenceData b = critical_temperature(fixtures::contact_model(4096, 0.5));
  CHECK(a.critical_temperature > 0);
  CHECK(std::abs(a.critical_temperature - b.critical_temperature) < 1e-6);
  // stronger coupling, higher T_c
  const ReferenceData c = critical_temperature(fixtures::contact_model(2048, 0.7));
  CHECK(c.critical_temperature > a.critical_temperature);
}

TEST_CASE("T_c errors") {
  CHECK_THROWS_AS(critical_temperature(fixtures::gaussian_model(256, 1e-3)), DomainError);
  TcOptions o;
  o.gap_tolerance = 1e6;
  CHECK_THROWS_AS(critical_temperature(fixtures::gaussian_model(256), o), InvariantViolation);
}

TEST_CASE("gap equation") {
  const Model m = fixtures::gaussian_model(1024);
  const ReferenceData ref = critical_temperature(m);
  const double tc = ref.critical_temperature;
  const Eigen::VectorXcd seed = delta_from_alpha(m, 0.05 * ref.alpha_star.cast<std::complex<double>>());

  SUBCASE("above T_c the gap collapses") {
    const GapSolution s = gap_equation_solve(m, tc + 0.01, seed);
    CHECK(s.delta.cwiseAbs().maxCoeff() < 1e-10);
  }
  SUBCASE("fixed point below T_c") {
    const GapSolution s = gap_equation_solve(m, tc - 0.01, seed);
    const Eigen::VectorXcd again = delta_from_alpha(m, gibbs_state(s.delta, tc - 0.01, m.grid, m.mu).alpha);
    CHECK((again - s.delta).cwiseAbs().maxCoeff() < 1e-9 * s.delta.cwiseAbs().maxCoeff());
    CHECK(s.delta.cwiseAbs().maxCoeff() > 1e-3);
  }
  SUBCASE("square-root onset") {
    const double n1 = weighted_norm(m.grid, gap_equation_solve(m, tc - 0.004, seed).delta);
    const double n2 = weighted_norm(m.grid, gap_equation_solve(m, tc - 0.001, seed).delta);
    CHECK(std::abs(n1 / n2 - 2.0) < 0.2);
  }
  SUBCASE("condensation pressure scales as the square of T_c - T") {
    const double d = 0.002;
    const double p1 = pressure_difference(gap_equation_solve(m, tc - d, seed).state, tc - d, m);
    const double p2 = pressure_difference(gap_equation_solve(m, tc - d / 2, seed).state, tc - d / 2, m);
    CHECK(p1 < 0);
    CHECK(std::abs(p1 / p2 - 4.0) < 0.4);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(gap_equation_solve(m, 0.0, seed), DomainError);
    CHECK_THROWS_AS(gap_equation_solve(m, tc, Eigen::VectorXcd::Zero(seed.size())), DomainError);
    GapOptions o;
    o.max_iterations = 2;
    CHECK_THROWS_AS(gap_equation_solve(m, tc - 0.05, seed, o), NonConvergence);
  }
}

TEST_CASE("initial states reproduce psi0 exactly") {
  const Model m = fixtures::gaussian_model(1024);
  const ReferenceData ref = critical_temperature(m);
  const double tc = ref.critical_temperature;
  const double h = 0.1;
  const std::complex<double> psi0(0.6, -0.3);
  for (auto kind : {InitialKind::PerturbedNormal, InitialKind::ScaledEquilibrium}) {
    const double T = kind == InitialKind::PerturbedNormal ? tc + h * h : tc - h * h;
    const BdGState s = build_initial_state(kind, psi0, h, ref, m, T);
    const std::complex<double> psi = inner(m.grid, ref.alpha_star, s.alpha) / h;
    CHECK(std::abs(psi - psi0) < 1e-12);
    CHECK_NOTHROW(check_admissible(s));
    const BdGState z = build_initial_state(kind, 0.0, h, ref, m, T);
    CHECK((z.gamma - normal_state(T, m.grid, m.mu).gamma).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(z.alpha.cwiseAbs().maxCoeff() == 0.0);
  }
  CHECK_THROWS_AS(build_initial_state(InitialKind::ScaledEquilibrium, psi0, h, ref, m, tc + 0.01), DomainError);
  CHECK_THROWS_AS(build_initial_state(InitialKind::PerturbedNormal, psi0, 0.0, ref, m, tc), DomainError);
  CHECK_THROWS_AS(build_initial_state(InitialKind::PerturbedNormal, 100.0, 1.0, ref, m, tc), DomainError);
  CHECK(initial_kind_from_string(to_string(InitialKind::ScaledEquilibrium)) == InitialKind::ScaledEquilibrium);
  CHECK_THROWS_AS(initial_kind_from_string("bogus"), DomainError);
}
