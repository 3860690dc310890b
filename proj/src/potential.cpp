#include "bdg/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/interpolators/cubic_hermite.hpp>
#include <boost/math/quadrature/gauss.hpp>

#include "bdg/errors.hpp"
#include "bdg/parallel.hpp"

namespace bdg {

namespace {

using Gauss8 = boost::math::quadrature::gauss<double, 8>;

// int_a^b v(q) q dq on one 8-point panel.
double moment_panel(const RadialFunction& v, double a, double b) {
  return Gauss8::integrate([&](double q) { return v(q) * q; }, a, b);
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

}  // namespace

double GaussianFormFactor::operator()(double k) const {
  return amplitude * std::exp(-k * k / (2.0 * width * width));
}

SeparableRankOne make_rank_one(const RadialFunction& profile, const MomentumGrid& grid) {
  SeparableRankOne p;
  p.profile = profile;
  p.values.resize(grid.nodes.size());
  for (Eigen::Index i = 0; i < grid.nodes.size(); ++i) p.values[i] = profile(std::abs(grid.nodes[i]));
  return p;
}

SeparableRankOne make_gaussian_rank_one(double amplitude, double width, const MomentumGrid& grid) {
  if (!(width > 0)) throw DomainError("gaussian width must be positive");
  GaussianFormFactor g{amplitude, width};
  SeparableRankOne p = make_rank_one(g, grid);
  p.gaussian = g;
  return p;
}

LocalRadial make_local_radial(const RadialFunction& v_hat, const MomentumGrid& grid) {
  if (grid.dimension != Dimension::ThreeDRadial)
    throw DomainError("local radial potential requires a 3d radial grid");

  // G(q) on a uniform table; G' = v(q) q is known exactly, so cubic Hermite
  // interpolation is fourth-order accurate.
  const double q_max = 2.0 * grid.k_max * (1.0 + 1e-12);
  const double dq = 1e-3;
  const auto m = static_cast<std::size_t>(std::ceil(q_max / dq)) + 1;
  std::vector<double> g(m), dg(m);
  g[0] = 0.0;
  dg[0] = 0.0;
  for (std::size_t i = 1; i < m; ++i) {
    const double q = static_cast<double>(i) * dq;
    g[i] = g[i - 1] + moment_panel(v_hat, q - dq, q);
    dg[i] = v_hat(q) * q;
  }
  boost::math::interpolators::cardinal_cubic_hermite table(std::move(g), std::move(dg), 0.0, dq);

  const auto n = static_cast<Eigen::Index>(grid.size());
  const double prefactor = std::pow(2.0 * std::numbers::pi, -1.5);
  LocalRadial out;
  out.v_hat = v_hat;
  out.kernel.resize(n, n);
  parallel::for_each(grid.size(), [&](std::size_t ii) {
    const auto i = static_cast<Eigen::Index>(ii);
    const double k = grid.nodes[i];
    for (Eigen::Index j = 0; j <= i; ++j) {
      const double kp = grid.nodes[j];
      const double lo = std::abs(k - kp), hi = k + kp;
      // Narrow shells: integrate directly to avoid cancellation in G(hi) - G(lo).
      const double moment = (hi - lo) < 0.1 ? moment_panel(v_hat, lo, hi) : table(hi) - table(lo);
      out.kernel(i, j) = prefactor * moment / (2.0 * k * kp);
    }
  });
  out.kernel.triangularView<Eigen::StrictlyUpper>() = out.kernel.transpose();
  return out;
}

std::optional<Eigen::VectorXd> rank_one_vector(const Potential& potential,
                                               const MomentumGrid& grid) {
  return std::visit(
      overloaded{
          [&](const Contact1D& c) -> std::optional<Eigen::VectorXd> {
            // -g delta(x): (V alpha)^ = -(g / 2 pi) int alpha dk.
            return Eigen::VectorXd::Constant(grid.nodes.size(),
                                             std::sqrt(c.coupling / (2.0 * std::numbers::pi)));
          },
          [&](const SeparableRankOne& r) -> std::optional<Eigen::VectorXd> { return r.values; },
          [&](const LocalRadial&) -> std::optional<Eigen::VectorXd> { return std::nullopt; }},
      potential);
}

std::string potential_name(const Potential& potential) {
  return std::visit(overloaded{[](const Contact1D&) { return std::string("contact"); },
                               [](const SeparableRankOne& r) {
                                 return std::string(r.gaussian ? "gaussian-rank-one"
                                                               : "tabulated-rank-one");
                               },
                               [](const LocalRadial&) { return std::string("local-radial"); }},
                    potential);
}

std::complex<double> inner(const MomentumGrid& grid, const Eigen::VectorXd& f,
                           const Eigen::VectorXcd& g) {
  return parallel::sum<std::complex<double>>(grid.size(), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return grid.weights[k] * f[k] * g[k];
  });
}

std::complex<double> inner(const MomentumGrid& grid, const Eigen::VectorXcd& f,
                           const Eigen::VectorXcd& g) {
  return parallel::sum<std::complex<double>>(grid.size(), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return grid.weights[k] * std::conj(f[k]) * g[k];
  });
}

double weighted_norm(const MomentumGrid& grid, const Eigen::VectorXcd& f) {
  return std::sqrt(parallel::sum<double>(grid.size(), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return grid.weights[k] * std::norm(f[k]);
  }));
}

double weighted_norm(const MomentumGrid& grid, const Eigen::VectorXd& f) {
  return std::sqrt(parallel::sum<double>(grid.size(), [&](std::size_t i) {
    const auto k = static_cast<Eigen::Index>(i);
    return grid.weights[k] * f[k] * f[k];
  }));
}

Eigen::VectorXcd apply_potential(const Model& model, const Eigen::VectorXcd& alpha) {
  const MomentumGrid& grid = model.grid;
  if (alpha.size() != grid.nodes.size()) throw DomainError("field size does not match grid");
  return std::visit(
      overloaded{
          [&](const Contact1D& c) -> Eigen::VectorXcd {
            if (grid.dimension != Dimension::OneD)
              throw DomainError("contact potential requires a 1d grid");
            const std::complex<double> total = inner(grid, Eigen::VectorXd(Eigen::VectorXd::Ones(alpha.size())), alpha);
            return Eigen::VectorXcd::Constant(alpha.size(), -c.coupling / (2.0 * std::numbers::pi) * total);
          },
          [&](const SeparableRankOne& r) -> Eigen::VectorXcd {
            if (r.values.size() != alpha.size()) throw DomainError("form factor does not match grid");
            const std::complex<double> overlap = inner(grid, r.values, alpha);
            return -overlap * r.values.cast<std::complex<double>>();
          },
          [&](const LocalRadial& l) -> Eigen::VectorXcd {
            if (grid.dimension != Dimension::ThreeDRadial)
              throw DomainError("local radial potential requires a 3d radial grid");
            if (l.kernel.rows() != alpha.size()) throw DomainError("kernel does not match grid");
            const Eigen::VectorXd re = l.kernel * grid.weights.cwiseProduct(alpha.real());
            const Eigen::VectorXd im = l.kernel * grid.weights.cwiseProduct(alpha.imag());
            Eigen::VectorXcd out(alpha.size());
            out.real() = re;
            out.imag() = im;
            return out;
          }},
      model.potential);
}

Eigen::VectorXcd delta_from_alpha(const Model& model, const Eigen::VectorXcd& alpha) {
  return 2.0 * apply_potential(model, alpha);
}

}  // namespace bdg
