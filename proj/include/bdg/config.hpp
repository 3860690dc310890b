#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bdg/grid.hpp"
#include "bdg/spectral.hpp"

namespace bdg {

enum class PotentialKind { Gaussian, Tabulated, Contact, LocalGaussian, LocalTabulated };

std::string to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

/// Gaussian amplitude giving T_c = 0.2 at mu = 1, width 1 (3d radial).
inline constexpr double kDeskAmplitude = 0.34846982014278877;

struct PotentialSpec {
  PotentialKind kind = PotentialKind::Gaussian;
  double amplitude = kDeskAmplitude;  // gaussian form factor / local V_hat depth
  double width = 1.0;
  double coupling = 1.0;              // contact
  std::string file;                   // tabulated kinds

  bool operator==(const PotentialSpec&) const = default;
};

struct EvolveSpec {
  std::optional<double> dt;
  double dt_factor = 0.1;  // dt = dt_factor / max E when dt is unset
  std::optional<double> t_end;
  double horizon = 10.0;   // t_end = horizon / |T - T_c| when t_end is unset
  std::size_t observe_every = 100;
  int midpoint_iters = 2;

  bool operator==(const EvolveSpec&) const = default;
};

struct OutputSpec {
  std::string csv;
  std::string summary;
  std::vector<double> snapshot_times;

  bool operator==(const OutputSpec&) const = default;
};

struct RunConfig {
  Dimension dimension = Dimension::ThreeDRadial;
  PotentialSpec potential;
  double mu = 1.0;
  std::optional<double> temperature;  // absolute T; otherwise T = T_c + tau h^2
  double tau = 1.0;
  double h = 0.1;
  std::complex<double> psi0{1.0, 0.0};
  InitialKind initial = InitialKind::PerturbedNormal;
  GridSpec grid;
  EvolveSpec evolve;
  OutputSpec output;
  double c_gl = 1.0;
  double theta_im = -0.1;
  bool rootfind = true;
  double plateau_constant = 0.79056941504209488;  // bound C sqrt(h); 0.25 at h = 0.1
  std::optional<double> shell_delta;              // default h sqrt(mu)

  bool operator==(const RunConfig&) const = default;
};

/// Sectioned key = value text with '#' comments. Required: model.potential,
/// model.mu, run.h. Unknown keys, bad values and violated constraints throw
/// ConfigError naming the key.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every key with its value; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& config);

}  // namespace bdg
