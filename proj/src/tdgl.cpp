#include "bdg/tdgl.hpp"

#include <algorithm>
#include <cmath>

#include "bdg/errors.hpp"

namespace bdg {

namespace {

void validate(const TdglParams& p) {
  if (!(p.d.imag() > 0)) throw DomainError("tdgl: Im d must be positive");
  if (!(p.b >= 0)) throw DomainError("tdgl: b must be nonnegative");
}

std::complex<double> rhs(const TdglParams& p, std::complex<double> psi) {
  const std::complex<double> minus_i(0.0, -1.0);
  return minus_i * (p.a + p.b * std::norm(psi)) * psi / p.d;
}

}  // namespace

TdglParams tdgl_preset(double c_gl, double t_minus_tc, double rate) {
  if (!(c_gl > 0)) throw DomainError("tdgl: C_GL must be positive");
  if (!(t_minus_tc > 0)) throw DomainError("tdgl preset requires T > T_c");
  if (!(rate > 0)) throw DomainError("tdgl preset requires a positive decay rate");
  TdglParams p;
  p.c_gl = c_gl;
  p.a = c_gl * t_minus_tc;
  p.b = 2.0;
  p.d = {0.0, p.a / rate};
  return p;
}

double gl_energy(const TdglParams& params, std::complex<double> psi) {
  const double n = std::norm(psi);
  return params.a * n + 0.5 * params.b * n * n;
}

std::vector<TdglSample> tdgl_evolve(std::complex<double> psi0, const TdglParams& params,
                                    const std::vector<double>& t_grid, double max_phase) {
  validate(params);
  if (!(max_phase > 0)) throw DomainError("tdgl: max_phase must be positive");
  std::vector<TdglSample> out;
  out.reserve(t_grid.size());
  if (t_grid.empty()) return out;
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) throw DomainError("tdgl: t_grid must be increasing");

  std::complex<double> psi = psi0;
  double t = t_grid.front();
  out.push_back({t, psi, gl_energy(params, psi)});
  for (std::size_t j = 1; j < t_grid.size(); ++j) {
    const double span = t_grid[j] - t;
    const double rate = (std::abs(params.a) + params.b * std::norm(psi)) / std::abs(params.d);
    const auto sub = std::max<long>(1, static_cast<long>(std::ceil(span * rate / max_phase)));
    const double h = span / static_cast<double>(sub);
    for (long s = 0; s < sub; ++s) {
      const auto k1 = rhs(params, psi);
      const auto k2 = rhs(params, psi + 0.5 * h * k1);
      const auto k3 = rhs(params, psi + 0.5 * h * k2);
      const auto k4 = rhs(params, psi + h * k3);
      psi += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    t = t_grid[j];
    out.push_back({t, psi, gl_energy(params, psi)});
  }
  return out;
}

std::complex<double> tdgl_linear_exact(std::complex<double> psi0, const TdglParams& params, double t) {
  validate(params);
  const std::complex<double> minus_i(0.0, -1.0);
  return psi0 * std::exp(minus_i * params.a * t / params.d);
}

}  // namespace bdg
