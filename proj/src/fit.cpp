#include "bdg/fit.hpp"

#include <algorithm>
#include <cmath>

#include "bdg/errors.hpp"

namespace bdg {

FitResult fit_scaling(const std::vector<double>& x, const std::vector<double>& y, FitModel model) {
  if (x.size() != y.size()) throw DomainError("fit: x and y differ in length");
  if (x.size() < 3) throw DomainError("fit: at least 3 points required");
  const auto n = static_cast<double>(x.size());
  std::vector<double> u(x.size()), v(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0)) throw DomainError("fit: nonpositive data");
    if (model == FitModel::PowerLaw && !(x[i] > 0)) throw DomainError("fit: nonpositive abscissa");
    u[i] = model == FitModel::PowerLaw ? std::log(x[i]) : x[i];
    v[i] = std::log(y[i]);
  }
  double mu_u = 0, mu_v = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu_u += u[i];
    mu_v += v[i];
  }
  mu_u /= n;
  mu_v /= n;
  double suu = 0, suv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    suu += (u[i] - mu_u) * (u[i] - mu_u);
    suv += (u[i] - mu_u) * (v[i] - mu_v);
  }
  if (!(suu > 0)) throw DomainError("fit: degenerate abscissae");
  FitResult r;
  r.slope = suv / suu;
  r.intercept = mu_v - r.slope * mu_u;
  for (std::size_t i = 0; i < u.size(); ++i)
    r.residual = std::max(r.residual, std::abs(v[i] - r.intercept - r.slope * u[i]));
  return r;
}

FitModel fit_model_from_string(const std::string& s) {
  if (s == "power-law") return FitModel::PowerLaw;
  if (s == "exponential") return FitModel::Exponential;
  throw DomainError("unknown fit model '" + s + "'");
}

}  // namespace bdg
