#pragma once

#include <complex>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "bdg/potential.hpp"
#include "bdg/spectral.hpp"
#include "bdg/state.hpp"

namespace bdg {

/// psi = h^{-1} <alpha_*, alpha>.
std::complex<double> psi_of(const BdGState& state, const ReferenceData& reference,
                            const MomentumGrid& grid, double h);

/// alpha = h psi alpha_* + xi, gamma = gamma_n(T) + eta.
struct Decomposition {
  std::complex<double> psi;
  Eigen::VectorXcd xi;
  Eigen::VectorXd eta;
};

Decomposition decompose(const BdGState& state, const ReferenceData& reference, const MomentumGrid& grid,
                        double h, double temperature);

/// max_k | eta_t^2 - eta_0^2 - (eta_t - eta_0) tanh(eps / 2T) + |alpha_t|^2 - |alpha_0|^2 |.
double eq10_residual(const BdGState& state_t, const BdGState& state_0, double temperature,
                     const MomentumGrid& grid, double mu);

/// int over ||k| - sqrt(mu)| <= delta of |field|^2. Throws DomainError if the
/// shell holds fewer than 8 nodes (per sign in one dimension).
double fermi_shell_mass(const Eigen::VectorXcd& field, double delta, double mu, const MomentumGrid& grid);

struct EtaCubicResidual {
  double outside = 0.0;  // max of |(eta_t - eta_0) - (|alpha_t|^2 - |alpha_0|^2) / tanh(eps / 2T)|
  double inside = 0.0;   // max of |eta_t - eta_0| inside the shell
};

EtaCubicResidual eta_cubic_residual(const BdGState& state_t, const BdGState& state_0, double temperature,
                                    const MomentumGrid& grid, double mu, double exclusion);

struct ObservablesRecord {
  double t = 0.0;
  std::complex<double> psi;
  double abs_psi_sq = 0.0;
  double pressure_drift = 0.0;
  double s_drift = 0.0;
  double xi_norm = 0.0;
  double eta_norm = 0.0;
  double delta_norm = 0.0;
  double eq10_residual = 0.0;
  double admissibility_margin = 0.0;
};

struct MonitorTolerances {
  double s_drift = 1e-10;
  double eq10 = 1e-9;
  double admissibility = -1e-12;
};

/// Records one ObservablesRecord per observation of a nonlinear run and
/// collects invariant violations.
class Monitor {
 public:
  Monitor(const Model& model, const ReferenceData& reference, double h, double temperature,
          const BdGState& state0, MonitorTolerances tol = {});

  const ObservablesRecord& observe(double t, const BdGState& state, const Eigen::VectorXcd& delta);

  const std::vector<ObservablesRecord>& records() const { return records_; }
  const std::vector<std::string>& failures() const { return failures_; }
  bool ok() const { return failures_.empty(); }

  double max_abs_psi_sq_deviation() const;
  double max_pressure_drift() const;
  double max_s_drift() const;

 private:
  const Model& model_;
  const ReferenceData& reference_;
  double h_;
  double temperature_;
  BdGState state0_;
  Eigen::VectorXd s0_;
  double pressure0_;
  MonitorTolerances tol_;
  std::vector<ObservablesRecord> records_;
  std::vector<std::string> failures_;
};

}  // namespace bdg
