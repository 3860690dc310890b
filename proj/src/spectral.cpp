#include "bdg/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <vector>

#include <Eigen/Eigenvalues>
#include <boost/math/tools/roots.hpp>

#include "bdg/errors.hpp"
#include "bdg/parallel.hpp"

namespace bdg {

namespace {

Eigen::VectorXd kt_diagonal(const Model& model, double temperature) {
  const Eigen::VectorXd eps = dispersion(model.grid, model.mu);
  Eigen::VectorXd d(eps.size());
  for (Eigen::Index i = 0; i < eps.size(); ++i) d[i] = k_t(eps[i], temperature);
  return d;
}

// Diagonal-plus-rank-one problem D - v v^T with distinct diagonal entries
// merged (the merged weight is the sum of v_i^2). Only the sector spanned by v
// is seen by the secular equation; the complementary modes sit exactly on the
// diagonal values and carry no pairing.
struct Secular {
  std::vector<double> d;   // ascending, distinct
  std::vector<double> z2;  // merged v_i^2

  Secular(const Eigen::VectorXd& diag, const Eigen::VectorXd& v) {
    std::map<double, double> merged;
    for (Eigen::Index i = 0; i < diag.size(); ++i) merged[diag[i]] += v[i] * v[i];
    for (auto [value, weight] : merged) {
      d.push_back(value);
      z2.push_back(weight);
    }
  }

  double operator()(double nu) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) acc += z2[i] / (d[i] - nu);
    return 1.0 - acc;
  }

  // Root on the open interval (lo, hi) where f decreases from + to -.
  double root_between(double lo, double hi) const {
    const double span = hi - lo;
    double a = lo, b = hi;
    // Step inside the poles until the sign change is visible.
    double step = 1e-3 * span;
    if (std::isfinite(lo)) {
      a = lo + step;
      while ((*this)(a) < 0 && step > 1e-300) {
        step *= 1e-3;
        a = lo + step;
      }
    }
    step = 1e-3 * span;
    b = hi - step;
    while ((*this)(b) > 0 && step > 1e-300) {
      step *= 1e-3;
      b = hi - step;
    }
    const double fa = (*this)(a), fb = (*this)(b);
    if (!(fa >= 0 && fb <= 0)) throw NonConvergence("secular equation: no sign change", fa);
    if (fa == 0) return a;
    if (fb == 0) return b;
    boost::math::tools::eps_tolerance<double> tol(52);
    std::uintmax_t iters = 300;
    auto [r0, r1] = boost::math::tools::toms748_solve(*this, a, b, fa, fb, tol, iters);
    return 0.5 * (r0 + r1);
  }

  double lowest() const {
    const double total = std::accumulate(z2.begin(), z2.end(), 0.0);
    return root_between(d.front() - total - 1.0, d.front());
  }

  double second() const {
    if (d.size() < 2) return std::numeric_limits<double>::infinity();
    return root_between(d[0], d[1]);
  }
};

Eigenpair rank_one_eigenpair(const Model& model, double temperature, const Eigen::VectorXd& u) {
  const MomentumGrid& grid = model.grid;
  const Eigen::VectorXd diag = kt_diagonal(model, temperature);
  const Eigen::VectorXd sqrt_w = grid.weights.cwiseSqrt();
  const Eigen::VectorXd v = sqrt_w.cwiseProduct(u);
  const Secular secular(diag, v);

  Eigenpair out;
  out.value = secular.lowest();
  out.second_value = secular.second();
  Eigen::VectorXd x = v.array() / (diag.array() - out.value);
  x /= x.norm();
  const Eigen::VectorXd mx = diag.cwiseProduct(x) - v * v.dot(x);
  out.residual = (mx - out.value * x).norm();
  out.vector = x.cwiseQuotient(sqrt_w);
  return out;
}

Eigenpair dense_eigenpair(const Model& model, double temperature) {
  const Eigen::MatrixXd m = assemble_kt_plus_v(model, temperature);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m);
  if (solver.info() != Eigen::Success) throw NonConvergence("dense eigensolver failed", 0.0);
  Eigenpair out;
  out.value = solver.eigenvalues()[0];
  out.second_value = m.rows() > 1 ? solver.eigenvalues()[1] : std::numeric_limits<double>::infinity();
  Eigen::VectorXd x = solver.eigenvectors().col(0);
  const Eigen::VectorXd sqrt_w = model.grid.weights.cwiseSqrt();
  // Probe: the integral of the field.
  if (x.dot(sqrt_w) < 0) x = -x;
  out.residual = (m * x - out.value * x).norm();
  out.vector = x.cwiseQuotient(sqrt_w);
  return out;
}

}  // namespace

Eigen::MatrixXd assemble_kt_plus_v(const Model& model, double temperature) {
  const MomentumGrid& grid = model.grid;
  const auto n = static_cast<Eigen::Index>(grid.size());
  const Eigen::VectorXd sqrt_w = grid.weights.cwiseSqrt();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  if (const auto u = rank_one_vector(model.potential, grid)) {
    const Eigen::VectorXd v = sqrt_w.cwiseProduct(*u);
    m.noalias() = -v * v.transpose();
  } else {
    const auto& local = std::get<LocalRadial>(model.potential);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j; i < n; ++i) m(i, j) = sqrt_w[i] * local.kernel(i, j) * sqrt_w[j];
    m.triangularView<Eigen::StrictlyUpper>() = m.transpose();
  }
  m.diagonal() += kt_diagonal(model, temperature);
  return m;
}

Eigenpair lowest_eigenpair(const Model& model, double temperature) {
  if (const auto u = rank_one_vector(model.potential, model.grid))
    return rank_one_eigenpair(model, temperature, *u);
  return dense_eigenpair(model, temperature);
}

double lowest_eigenvalue(const Model& model, double temperature) {
  if (const auto u = rank_one_vector(model.potential, model.grid)) {
    const Eigen::VectorXd v = model.grid.weights.cwiseSqrt().cwiseProduct(*u);
    return Secular(kt_diagonal(model, temperature), v).lowest();
  }
  const Eigen::MatrixXd m = assemble_kt_plus_v(model, temperature);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NonConvergence("dense eigensolver failed", 0.0);
  return solver.eigenvalues()[0];
}

ReferenceData critical_temperature(const Model& model, const TcOptions& options) {
  double lo = options.t_lo;
  double hi = options.t_hi > 0 ? options.t_hi : model.mu;
  double f_lo = lowest_eigenvalue(model, lo);
  double f_hi = lowest_eigenvalue(model, hi);
  if (!(f_lo < 0 && f_hi > 0)) throw DomainError("T_c outside bracket");

  while (hi - lo > options.bisection_rtol * hi) {
    const double mid = 0.5 * (lo + hi);
    const double f = lowest_eigenvalue(model, mid);
    if (f < 0) {
      lo = mid;
      f_lo = f;
    } else {
      hi = mid;
      f_hi = f;
    }
  }
  // Secant polish, kept inside the bracket.
  double t0 = lo, f0 = f_lo, t1 = hi, f1 = f_hi;
  double tc = hi;
  for (int it = 0; it < 100; ++it) {
    double t2 = t1 - f1 * (t1 - t0) / (f1 - f0);
    if (!(t2 > lo && t2 < hi)) t2 = 0.5 * (lo + hi);
    const double f2 = lowest_eigenvalue(model, t2);
    if (f2 < 0) lo = t2; else hi = t2;
    t0 = t1; f0 = f1;
    t1 = t2; f1 = f2;
    tc = t2;
    if (f2 == 0 || std::abs(t1 - t0) <= options.secant_rtol * t2) break;
  }

  const Eigenpair pair = lowest_eigenpair(model, tc);
  if (!(pair.second_value - pair.value > options.gap_tolerance))
    throw InvariantViolation("non-degeneracy violated: spectral gap below tolerance");

  ReferenceData ref;
  ref.critical_temperature = tc;
  ref.spectral_gap = pair.second_value;
  ref.mu = model.mu;
  ref.eigen_residual = pair.residual;
  ref.alpha_star = pair.vector;
  ref.scalar_condition = std::numeric_limits<double>::quiet_NaN();
  if (const auto u = rank_one_vector(model.potential, model.grid)) {
    const Eigen::VectorXd kt = kt_diagonal(model, tc);
    const Eigen::VectorXd resolvent = u->cwiseQuotient(kt);
    ref.scalar_condition = model.grid.weights.dot(u->cwiseProduct(resolvent));
    ref.alpha_star = resolvent / weighted_norm(model.grid, resolvent);
  }
  return ref;
}

GapSolution gap_equation_solve(const Model& model, double temperature,
                               const Eigen::VectorXcd& delta_init, const GapOptions& options) {
  if (!(temperature > 0)) throw DomainError("temperature must be positive");
  const MomentumGrid& grid = model.grid;
  const double initial_norm = weighted_norm(grid, delta_init);
  if (!(initial_norm > 0)) throw DomainError("delta_init must be nonzero");

  GapSolution sol;
  Eigen::VectorXcd delta = delta_init;
  double residual = std::numeric_limits<double>::infinity();
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    const BdGState state = gibbs_state(delta, temperature, grid, model.mu);
    const Eigen::VectorXcd update = delta_from_alpha(model, state.alpha);
    Eigen::VectorXcd next = (1.0 - options.damping) * delta + options.damping * update;
    const double norm = weighted_norm(grid, delta);
    residual = weighted_norm(grid, Eigen::VectorXcd(next - delta)) / norm;
    delta = std::move(next);
    sol.iterations = it;
    if (weighted_norm(grid, delta) <= 1e-14 * initial_norm) {
      // Collapsed onto the normal state.
      sol.delta = Eigen::VectorXcd::Zero(delta.size());
      sol.state = normal_state(temperature, grid, model.mu);
      sol.residual = 0.0;
      return sol;
    }
    if (residual <= options.rtol) {
      sol.delta = delta;
      sol.state = gibbs_state(delta, temperature, grid, model.mu);
      sol.residual = residual;
      return sol;
    }
  }
  throw NonConvergence("gap equation did not converge", residual);
}

InitialKind initial_kind_from_string(const std::string& s) {
  if (s == "perturbed-normal") return InitialKind::PerturbedNormal;
  if (s == "scaled-equilibrium") return InitialKind::ScaledEquilibrium;
  throw DomainError("unknown initial-state kind '" + s + "'");
}

std::string to_string(InitialKind kind) {
  return kind == InitialKind::PerturbedNormal ? "perturbed-normal" : "scaled-equilibrium";
}

BdGState build_initial_state(InitialKind kind, std::complex<double> psi0, double h,
                             const ReferenceData& reference, const Model& model, double temperature) {
  if (!(h > 0)) throw DomainError("h must be positive");
  const MomentumGrid& grid = model.grid;
  Eigen::VectorXcd alpha;
  if (kind == InitialKind::PerturbedNormal) {
    alpha = (h * psi0) * reference.alpha_star.cast<std::complex<double>>();
  } else {
    if (temperature >= reference.critical_temperature)
      throw DomainError("scaled equilibrium requires T < T_c");
    const Eigen::VectorXcd seed =
        delta_from_alpha(model, 0.05 * reference.alpha_star.cast<std::complex<double>>());
    const GapSolution eq = gap_equation_solve(model, temperature, seed);
    const std::complex<double> projection = inner(grid, reference.alpha_star, eq.state.alpha);
    if (std::abs(projection) == 0.0) throw DomainError("equilibrium has no overlap with alpha_*");
    alpha = (h * psi0 / projection) * eq.state.alpha;
  }
  if (!(alpha.cwiseAbs().maxCoeff() < 0.5)) throw DomainError("h too large: pairing density reaches 1/2");
  return complete_pairing(alpha, temperature, grid, model.mu);
}

}  // namespace bdg
