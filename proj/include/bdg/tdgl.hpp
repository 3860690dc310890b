#pragma once

#include <complex>
#include <vector>

namespace bdg {

/// i d psi' = a psi + b |psi|^2 psi.
struct TdglParams {
  double a = 0.0;
  double b = 2.0;
  std::complex<double> d{0.0, 1.0};
  double c_gl = 1.0;
};

/// a = C_GL (T - T_c), d = i a / rate, so the linearized TDGL decays at `rate`.
/// b = 2 makes a|psi|^2 + (b/2)|psi|^4 the GL energy C_GL (T - T_c)|psi|^2 + |psi|^4.
TdglParams tdgl_preset(double c_gl, double t_minus_tc, double rate);

struct TdglSample {
  double t = 0.0;
  std::complex<double> psi;
  double gl_energy = 0.0;
};

/// a |psi|^2 + (b/2) |psi|^4, nonincreasing along the flow.
double gl_energy(const TdglParams& params, std::complex<double> psi);

/// RK4 between consecutive times of t_grid (increasing), with substeps small
/// enough that h * (|a| + b |psi|^2) / |d| <= max_phase.
std::vector<TdglSample> tdgl_evolve(std::complex<double> psi0, const TdglParams& params,
                                    const std::vector<double>& t_grid, double max_phase = 0.02);

/// Closed form for b = 0: psi0 exp(-i a t / d).
std::complex<double> tdgl_linear_exact(std::complex<double> psi0, const TdglParams& params, double t);

}  // namespace bdg
