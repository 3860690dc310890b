#include "bdg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "bdg/errors.hpp"
#include "bdg/parallel.hpp"

namespace bdg {

namespace {

void require_same_grid(const BdGState& a, const BdGState& b, const MomentumGrid& grid) {
  if (a.size() != grid.size() || b.size() != grid.size()) throw DomainError("states do not match grid");
}

}  // namespace

std::complex<double> psi_of(const BdGState& state, const ReferenceData& reference,
                            const MomentumGrid& grid, double h) {
  if (!(h > 0)) throw DomainError("h must be positive");
  return inner(grid, reference.alpha_star, state.alpha) / h;
}

Decomposition decompose(const BdGState& state, const ReferenceData& reference, const MomentumGrid& grid,
                        double h, double temperature) {
  Decomposition d;
  d.psi = psi_of(state, reference, grid, h);
  d.xi = state.alpha - (h * d.psi) * reference.alpha_star.cast<std::complex<double>>();
  d.eta = state.gamma - normal_state(temperature, grid, reference.mu).gamma;
  return d;
}

double eq10_residual(const BdGState& state_t, const BdGState& state_0, double temperature,
                     const MomentumGrid& grid, double mu) {
  require_same_grid(state_t, state_0, grid);
  const Eigen::VectorXd gamma_n = normal_state(temperature, grid, mu).gamma;
  const Eigen::VectorXd eps = dispersion(grid, mu);
  return parallel::max(grid.size(), 0.0, [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double eta_t = state_t.gamma[i] - gamma_n[i];
    const double eta_0 = state_0.gamma[i] - gamma_n[i];
    const double th = fermi_tanh(eps[i], temperature);
    return std::abs(eta_t * eta_t - eta_0 * eta_0 - (eta_t - eta_0) * th + std::norm(state_t.alpha[i]) -
                    std::norm(state_0.alpha[i]));
  });
}

double fermi_shell_mass(const Eigen::VectorXcd& field, double delta, double mu, const MomentumGrid& grid) {
  const double k_f = std::sqrt(mu);
  if (!(delta > 0 && delta < k_f)) throw DomainError("shell half-width must lie in (0, sqrt(mu))");
  if (static_cast<std::size_t>(field.size()) != grid.size()) throw DomainError("field does not match grid");
  double mass = 0.0;
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < field.size(); ++i) {
    if (std::abs(std::abs(grid.nodes[i]) - k_f) <= delta) {
      mass += grid.weights[i] * std::norm(field[i]);
      ++count;
    }
  }
  const std::size_t sides = grid.dimension == Dimension::OneD ? 2 : 1;
  if (count < 8 * sides) throw DomainError("Fermi shell resolved by fewer than 8 nodes");
  return mass;
}

EtaCubicResidual eta_cubic_residual(const BdGState& state_t, const BdGState& state_0, double temperature,
                                    const MomentumGrid& grid, double mu, double exclusion) {
  if (!(exclusion > 0)) throw DomainError("exclusion must be positive");
  require_same_grid(state_t, state_0, grid);
  const Eigen::VectorXd eps = dispersion(grid, mu);
  const double k_f = std::sqrt(mu);
  EtaCubicResidual r;
  for (Eigen::Index i = 0; i < eps.size(); ++i) {
    // eta_t - eta_0 = gamma_t - gamma_0
    const double d_eta = state_t.gamma[i] - state_0.gamma[i];
    if (std::abs(std::abs(grid.nodes[i]) - k_f) <= exclusion) {
      r.inside = std::max(r.inside, std::abs(d_eta));
    } else {
      const double d_alpha = std::norm(state_t.alpha[i]) - std::norm(state_0.alpha[i]);
      r.outside = std::max(r.outside, std::abs(d_eta - d_alpha / fermi_tanh(eps[i], temperature)));
    }
  }
  return r;
}

Monitor::Monitor(const Model& model, const ReferenceData& reference, double h, double temperature,
                 const BdGState& state0, MonitorTolerances tol)
    : model_(model),
      reference_(reference),
      h_(h),
      temperature_(temperature),
      state0_(state0),
      s0_(s_field(state0)),
      pressure0_(pressure_difference(state0, temperature, model)),
      tol_(tol) {}

const ObservablesRecord& Monitor::observe(double t, const BdGState& state, const Eigen::VectorXcd& delta) {
  const MomentumGrid& grid = model_.grid;
  const Decomposition d = decompose(state, reference_, grid, h_, temperature_);
  ObservablesRecord rec;
  rec.t = t;
  rec.psi = d.psi;
  rec.abs_psi_sq = std::norm(d.psi);
  rec.pressure_drift = pressure_difference(state, temperature_, model_) - pressure0_;
  const Eigen::VectorXd s = s_field(state);
  rec.s_drift = (s - s0_).cwiseAbs().maxCoeff();
  rec.xi_norm = weighted_norm(grid, d.xi);
  rec.eta_norm = weighted_norm(grid, d.eta);
  rec.delta_norm = weighted_norm(grid, delta);
  rec.eq10_residual = eq10_residual(state, state0_, temperature_, grid, model_.mu);
  rec.admissibility_margin = admissibility_margin(state);

  auto fail = [&](const char* what, double value) {
    std::ostringstream msg;
    msg << what << " = " << value << " at t = " << t;
    failures_.push_back(msg.str());
  };
  if (!(rec.s_drift <= tol_.s_drift)) fail("s drift", rec.s_drift);
  if (!(rec.eq10_residual <= tol_.eq10)) fail("eq10 residual", rec.eq10_residual);
  if (!(rec.admissibility_margin >= tol_.admissibility)) fail("admissibility margin", rec.admissibility_margin);
  records_.push_back(rec);
  return records_.back();
}

double Monitor::max_abs_psi_sq_deviation() const {
  if (records_.empty()) return 0.0;
  const double ref = records_.front().abs_psi_sq;
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, std::abs(r.abs_psi_sq - ref));
  return m;
}

double Monitor::max_pressure_drift() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, std::abs(r.pressure_drift));
  return m;
}

double Monitor::max_s_drift() const {
  double m = 0.0;
  for (const auto& r : records_) m = std::max(m, r.s_drift);
  return m;
}

}  // namespace bdg
