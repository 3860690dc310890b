#include "bdg/grid.hpp"

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/tools/roots.hpp>

#include "bdg/errors.hpp"

namespace bdg {

namespace {

// Gauss-Legendre rule on [-1, 1], ascending nodes.
template <unsigned Order>
std::pair<std::vector<double>, std::vector<double>> legendre_rule() {
  using rule = boost::math::quadrature::gauss<double, Order>;
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  std::vector<double> nodes, weights;
  for (std::size_t i = x.size(); i-- > 0;) {
    if (x[i] == 0.0) continue;
    nodes.push_back(-x[i]);
    weights.push_back(w[i]);
  }
  if (Order % 2 == 1) {
    nodes.push_back(0.0);
    weights.push_back(w[0]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] == 0.0) continue;
    nodes.push_back(x[i]);
    weights.push_back(w[i]);
  }
  return {nodes, weights};
}

std::pair<std::vector<double>, std::vector<double>> legendre_rule(int order) {
  switch (order) {
    case 8: return legendre_rule<8>();
    case 16: return legendre_rule<16>();
    case 32: return legendre_rule<32>();
    default: throw DomainError("panel_order must be 8, 16 or 32");
  }
}

struct SinhMap {
  double a, b, u0, k_f;
  double k(double u) const { return k_f + a * std::sinh(b * (u - u0)); }
  double dk(double u) const { return a * b * std::cosh(b * (u - u0)); }
};

// Fits k(0) = 0, k(1) = k_max for a given stretch b.
SinhMap fit_map(double k_f, double k_max, double b) {
  auto mismatch = [&](double a) {
    return std::asinh(k_f / a) + std::asinh((k_max - k_f) / a) - b;
  };
  boost::math::tools::eps_tolerance<double> tol(52);
  std::uintmax_t iters = 200;
  // mismatch is decreasing in a; bracket on a log scale.
  double lo = 1e-300, hi = 10.0 * k_max;
  while (mismatch(hi) > 0) hi *= 10.0;
  lo = hi;
  while (mismatch(lo) < 0) lo *= 0.1;
  auto [a0, a1] = boost::math::tools::toms748_solve(mismatch, lo, hi, tol, iters);
  const double a = 0.5 * (a0 + a1);
  return {a, b, std::asinh(k_f / a) / b, k_f};
}

void half_line(double k_f, double k_max, const GridSpec& spec, std::size_t n,
               std::vector<double>& nodes, std::vector<double>& weights) {
  const auto order = static_cast<std::size_t>(spec.panel_order);
  if (n == 0 || n % order != 0)
    throw DomainError("grid size must be a positive multiple of the panel order");
  const auto [x, w] = legendre_rule(spec.panel_order);
  const SinhMap map = fit_map(k_f, k_max, spec.clustering);
  const std::size_t panels = n / order;
  nodes.reserve(n);
  weights.reserve(n);
  for (std::size_t p = 0; p < panels; ++p) {
    const double lo = static_cast<double>(p) / static_cast<double>(panels);
    const double hi = static_cast<double>(p + 1) / static_cast<double>(panels);
    for (std::size_t j = 0; j < order; ++j) {
      const double u = lo + 0.5 * (x[j] + 1.0) * (hi - lo);
      nodes.push_back(map.k(u));
      weights.push_back(map.dk(u) * 0.5 * w[j] * (hi - lo));
    }
  }
}

}  // namespace

std::string to_string(Dimension d) { return d == Dimension::OneD ? "1d" : "3d"; }

Dimension dimension_from_string(const std::string& s) {
  if (s == "1d" || s == "1D") return Dimension::OneD;
  if (s == "3d" || s == "3D") return Dimension::ThreeDRadial;
  throw DomainError("unknown dimension '" + s + "'");
}

double MomentumGrid::domain_measure() const {
  if (dimension == Dimension::OneD) return 2.0 * k_max;
  return 4.0 / 3.0 * std::numbers::pi * k_max * k_max * k_max;
}

MomentumGrid make_grid(Dimension dim, double mu, const GridSpec& spec) {
  if (!(mu > 0)) throw DomainError("mu must be positive");
  const double k_f = std::sqrt(mu);
  const double k_max = spec.k_max > 0 ? spec.k_max : 6.0 * k_f;
  if (k_max <= k_f) throw DomainError("k_max must exceed the Fermi momentum");

  MomentumGrid grid;
  grid.dimension = dim;
  grid.k_max = k_max;
  std::vector<double> nodes, weights;
  if (dim == Dimension::ThreeDRadial) {
    half_line(k_f, k_max, spec, spec.n, nodes, weights);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      weights[i] *= 4.0 * std::numbers::pi * nodes[i] * nodes[i];
  } else {
    if (spec.n % 2 != 0) throw DomainError("1d grid size must be even");
    std::vector<double> hn, hw;
    half_line(k_f, k_max, spec, spec.n / 2, hn, hw);
    for (std::size_t i = hn.size(); i-- > 0;) {
      nodes.push_back(-hn[i]);
      weights.push_back(hw[i]);
    }
    nodes.insert(nodes.end(), hn.begin(), hn.end());
    weights.insert(weights.end(), hw.begin(), hw.end());
  }
  grid.nodes = Eigen::Map<Eigen::VectorXd>(nodes.data(), static_cast<Eigen::Index>(nodes.size()));
  grid.weights =
      Eigen::Map<Eigen::VectorXd>(weights.data(), static_cast<Eigen::Index>(weights.size()));
  validate(grid);
  return grid;
}

void validate(const MomentumGrid& grid) {
  const auto n = grid.nodes.size();
  if (n == 0 || grid.weights.size() != n) throw InvariantViolation("grid: empty or size mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(grid.weights[i] > 0)) throw InvariantViolation("grid: non-positive weight");
    if (i > 0 && !(grid.nodes[i] > grid.nodes[i - 1]))
      throw InvariantViolation("grid: nodes not strictly increasing");
  }
  if (grid.dimension == Dimension::ThreeDRadial) {
    if (!(grid.nodes[0] > 0)) throw InvariantViolation("grid: radial nodes must be positive");
  } else {
    for (Eigen::Index i = 0; i < n; ++i)
      if (grid.nodes[i] != -grid.nodes[n - 1 - i])
        throw InvariantViolation("grid: 1d nodes not symmetric about 0");
  }
  if (grid.nodes[n - 1] > grid.k_max) throw InvariantViolation("grid: node beyond k_max");
}

double integrate(const MomentumGrid& grid, const Eigen::VectorXd& f) {
  return grid.weights.dot(f);
}

}  // namespace bdg
