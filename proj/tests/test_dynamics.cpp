#include <doctest.h>

#include <cfloat>
#include <cmath>
#include <complex>

#include "bdg/dynamics.hpp"
#include "bdg/errors.hpp"
#include "bdg/linear_model.hpp"
#include "bdg/spectral.hpp"
#include "bdg/tdgl.hpp"
#include "fixtures.hpp"

using namespace bdg;
using cd = std::complex<double>;

namespace {

// U Gamma U^dagger with U = cos(E dt) - i sin(E dt) H / E, in long double.
std::pair<long double, std::complex<long double>> conjugate_ld(double gamma, cd alpha, double eps, cd delta,
                                                               double dt) {
  using cl = std::complex<long double>;
  const long double e = eps;
  const cl d(delta.real(), delta.imag());
  const long double E = std::sqrt(e * e + std::norm(d));
  const long double c = std::cos(E * dt);
  const long double sn = E > 0 ? std::sin(E * dt) / E : static_cast<long double>(dt);
  const cl i(0, 1);
  cl U[2][2] = {{c - i * sn * e, -i * sn * d}, {-i * sn * std::conj(d), c + i * sn * e}};
  const cl G[2][2] = {{cl(gamma), cl(alpha.real(), alpha.imag())},
                      {cl(alpha.real(), -alpha.imag()), cl(1.0L - gamma)}};
  cl UG[2][2], R[2][2];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) UG[a][b] = U[a][0] * G[0][b] + U[a][1] * G[1][b];
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) R[a][b] = UG[a][0] * std::conj(U[b][0]) + UG[a][1] * std::conj(U[b][1]);
  return {R[0][0].real(), R[0][1]};
}

double s_of(double g, cd a) { return std::sqrt((g - 0.5) * (g - 0.5) + std::norm(a)); }

}  // namespace

TEST_CASE("2x2 step: trivial cases") {
  const auto [g0, a0] = unitary_step_2x2(0.3, cd(0.1, 0.2), 0.7, cd(0.4, -0.1), 0.0);
  CHECK(g0 == 0.3);
  CHECK(a0 == cd(0.1, 0.2));
  const double dt = 0.37, eps = -0.8;
  const auto [g1, a1] = unitary_step_2x2(0.3, cd(0.1, 0.2), eps, 0.0, dt);
  CHECK(g1 == 0.3);
  CHECK(std::abs(a1 - std::exp(cd(0, -2 * eps * dt)) * cd(0.1, 0.2)) < 1e-15);
}

TEST_CASE("2x2 step against a long-double conjugation") {
  const double cases[][6] = {{0.3, 0.1, 0.2, 0.7, 0.4, -0.1},   {0.9, -0.05, 0.01, -2.0, 0.01, 0.02},
                             {0.5, 0.0, 0.49, 0.0, 1.0, 0.0},    {0.01, 0.05, -0.03, 35.0, 0.0, 0.3},
                             {0.5, 0.25, 0.25, 1e-9, 1e-7, 0.0}};
  for (const auto& p : cases) {
    for (double dt : {1e-3, 0.013, 0.2}) {
      const cd a(p[1], p[2]), d(p[4], p[5]);
      const auto [g, an] = unitary_step_2x2(p[0], a, p[3], d, dt);
      const auto [gl, al] = conjugate_ld(p[0], a, p[3], d, dt);
      CHECK(std::abs(g - static_cast<double>(gl)) < 1e-14);
      CHECK(std::abs(an - cd(static_cast<double>(al.real()), static_cast<double>(al.imag()))) < 1e-14);
      CHECK(std::abs(s_of(g, an) - s_of(p[0], a)) <= 4 * DBL_EPSILON * std::max(0.5, s_of(p[0], a)));
    }
  }
}

TEST_CASE("2x2 step is time symmetric") {
  const cd d(0.2, 0.05);
  const auto [g1, a1] = unitary_step_2x2(0.2, cd(0.3, -0.1), 0.4, d, 0.05);
  const auto [g2, a2] = unitary_step_2x2(g1, a1, 0.4, d, -0.05);
  CHECK(std::abs(g2 - 0.2) < 1e-15);
  CHECK(std::abs(a2 - cd(0.3, -0.1)) < 1e-15);
}

TEST_CASE("nonlinear flow") {
  const Model m = fixtures::gaussian_model(512);
  const ReferenceData ref = critical_temperature(m);
  const double tc = ref.critical_temperature;

  SUBCASE("normal state is exactly stationary") {
    const BdGState n = normal_state(tc + 0.01, m.grid, m.mu);
    EvolveConfig ec{0.5 / max_quasiparticle_energy(n, m), 2.0, 10, 2};
    const EvolveResult r = evolve_nonlinear(n, m, ec);
    CHECK((r.state.gamma - n.gamma).cwiseAbs().maxCoeff() == 0.0);
    CHECK(r.state.alpha.cwiseAbs().maxCoeff() == 0.0);
  }

  SUBCASE("equilibrium is stationary") {
    const double T = tc - 0.01;
    const Eigen::VectorXcd seed = delta_from_alpha(m, 0.05 * ref.alpha_star.cast<cd>());
    const GapSolution eq = gap_equation_solve(m, T, seed, GapOptions{0.5, 1e-13, 100000});
    EvolveConfig ec{0.5 / max_quasiparticle_energy(eq.state, m), 20.0, 100, 2};
    const EvolveResult r = evolve_nonlinear(eq.state, m, ec);
    CHECK((r.state.alpha - eq.state.alpha).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((r.state.gamma - eq.state.gamma).cwiseAbs().maxCoeff() < 1e-10);
  }

  SUBCASE("s field and gauge covariance") {
    const BdGState s0 = build_initial_state(InitialKind::PerturbedNormal, cd(0.8, 0.3), 0.2, ref, m, tc + 0.04);
    EvolveConfig ec{0.5 / max_quasiparticle_energy(s0, m), 5.0, 1, 2};
    std::size_t calls = 0;
    double last_t = -1;
    const EvolveResult r = evolve_nonlinear(s0, m, ec, [&](double t, const BdGState&, const Eigen::VectorXcd&) {
      ++calls;
      last_t = t;
    });
    CHECK(calls == r.steps + 1);
    CHECK(last_t == doctest::Approx(r.steps * ec.dt).epsilon(1e-14));
    CHECK(last_t >= ec.t_end);
    CHECK(last_t < ec.t_end + ec.dt);
    CHECK((s_field(r.state) - s_field(s0)).cwiseAbs().maxCoeff() < 1e-13);

    BdGState rotated = s0;
    const cd phase = std::polar(1.0, -1.1);
    rotated.alpha *= phase;
    const EvolveResult rr = evolve_nonlinear(rotated, m, ec);
    CHECK((phase * r.state.alpha - rr.state.alpha).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((r.state.gamma - rr.state.gamma).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("step size guard") {
    const BdGState n = normal_state(tc, m.grid, m.mu);
    EvolveConfig ec{2.0 / max_quasiparticle_energy(n, m), 1.0, 1, 2};
    CHECK_THROWS_AS(evolve_nonlinear(n, m, ec), DomainError);
  }
}

TEST_CASE("hamiltonian field") {
  const Model m = fixtures::gaussian_model(256);
  const BdGState n = normal_state(0.2, m.grid, m.mu);
  const HamiltonianField f = hamiltonian_field(n, m);
  CHECK((f.epsilon - dispersion(m.grid, m.mu)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(f.delta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(max_quasiparticle_energy(n, m) == doctest::Approx(f.epsilon.cwiseAbs().maxCoeff()));
}

TEST_CASE("linear evolution") {
  SUBCASE("V = 0 closed form") {
    Model m = fixtures::gaussian_model(256);
    m.potential = make_local_radial([](double) { return 0.0; }, m.grid);
    const LinearModel lm = build_linear_model(m, 0.1);
    const Eigen::VectorXd eps = dispersion(m.grid, m.mu);
    Eigen::VectorXcd a0(eps.size());
    for (Eigen::Index i = 0; i < a0.size(); ++i) a0[i] = cd(std::exp(-eps[i] * eps[i]), 0.1);
    CHECK((linear_evolve(a0, lm, 0.0) - a0).cwiseAbs().maxCoeff() < 1e-12);
    const double t = 3.7;
    const Eigen::VectorXcd at = linear_evolve(a0, lm, t);
    for (Eigen::Index i = 0; i < a0.size(); ++i)
      CHECK(std::abs(at[i] - std::exp(cd(0, -2 * eps[i] * t)) * a0[i]) < 1e-10);
  }

  SUBCASE("propagation is unitary and the overlap agrees") {
    const Model m = fixtures::gaussian_model(512);
    const ReferenceData ref = critical_temperature(m);
    const LinearModel lm = build_linear_model(m, ref.critical_temperature + 0.01);
    Eigen::VectorXcd y = Eigen::VectorXcd::Zero(lm.sqrt_weights.size());
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = cd(std::sin(0.1 * i), std::cos(0.03 * i));
    for (double t : {0.5, 10.0, 100.0})
      CHECK(std::abs(propagate_symmetrized(y, lm, t).norm() / y.norm() - 1.0) < 1e-12);

    const Eigen::VectorXcd a0 = 0.1 * ref.alpha_star.cast<cd>();
    const LinearOverlap ov(lm, ref.alpha_star, a0);
    for (double t : {0.0, 3.0, 40.0}) {
      const cd direct = inner(m.grid, ref.alpha_star, linear_evolve(a0, lm, t));
      CHECK(std::abs(ov(t) - direct) < 1e-12);
    }
    CHECK(std::abs(ov(0.0) - 0.1) < 1e-12);
  }

  SUBCASE("small amplitude nonlinear flow follows the linear one") {
    const Model m = fixtures::gaussian_model(512);
    const ReferenceData ref = critical_temperature(m);
    const double h = 0.02, T = ref.critical_temperature + h * h;
    const BdGState s0 = build_initial_state(InitialKind::PerturbedNormal, 1.0, h, ref, m, T);
    EvolveConfig ec{0.25 / max_quasiparticle_energy(s0, m), 30.0, 1000000, 2};
    const EvolveResult r = evolve_nonlinear(s0, m, ec);
    const LinearModel lm = build_linear_model(m, T);
    const cd lin = inner(m.grid, ref.alpha_star, linear_evolve(s0.alpha, lm, r.t));
    const cd non = inner(m.grid, ref.alpha_star, r.state.alpha);
    CHECK(std::abs(non - lin) < 0.05 * std::abs(lin));
  }

  SUBCASE("below T_c the linear model is rejected") {
    const Model m = fixtures::gaussian_model(256);
    const ReferenceData ref = critical_temperature(m);
    CHECK_THROWS_AS(build_linear_model(m, ref.critical_temperature - 0.01), DomainError);
  }
}

TEST_CASE("TDGL") {
  SUBCASE("b = 0 matches the closed form") {
    TdglParams p = tdgl_preset(1.0, 0.01, 0.05);
    p.b = 0.0;
    std::vector<double> ts;
    for (int i = 0; i <= 50; ++i) ts.push_back(i * 2.0);
    const auto out = tdgl_evolve(cd(0.5, 0.2), p, ts);
    REQUIRE(out.size() == ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
      CHECK(std::abs(out[i].psi - tdgl_linear_exact(cd(0.5, 0.2), p, ts[i])) < 1e-9);
    CHECK(std::abs(std::abs(out.back().psi) - std::abs(cd(0.5, 0.2)) * std::exp(-0.05 * 100.0)) < 1e-9);
  }
  SUBCASE("energy is nonincreasing and the flow decays above T_c") {
    const TdglParams p = tdgl_preset(0.79, 0.01, 0.024);
    std::vector<double> ts;
    for (int i = 0; i <= 400; ++i) ts.push_back(i * 1.0);
    const auto out = tdgl_evolve(1.0, p, ts);
    for (std::size_t i = 1; i < out.size(); ++i) CHECK(out[i].gl_energy <= out[i - 1].gl_energy + 1e-15);
    CHECK(std::abs(out.back().psi) < 0.1);
    CHECK(gl_energy(p, 1.0) == doctest::Approx(p.a + 1.0));
  }
  SUBCASE("below T_c the magnitude relaxes to the GL minimum") {
    const TdglParams p{-0.01, 2.0, cd(0, 0.5), 1.0};
    const auto out = tdgl_evolve(0.01, p, {0.0, 2000.0});
    CHECK(std::abs(out.back().psi) == doctest::Approx(std::sqrt(-p.a / p.b)).epsilon(1e-6));
  }
}
