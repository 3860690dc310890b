#pragma once

#include "bdg/config.hpp"
#include "bdg/grid.hpp"
#include "bdg/potential.hpp"
#include "bdg/spectral.hpp"

namespace fixtures {

inline bdg::Model gaussian_model(std::size_t n = 512, double amplitude = bdg::kDeskAmplitude) {
  bdg::Model m;
  m.mu = 1.0;
  bdg::GridSpec spec;
  spec.n = n;
  m.grid = bdg::make_grid(bdg::Dimension::ThreeDRadial, m.mu, spec);
  m.potential = bdg::make_gaussian_rank_one(amplitude, 1.0, m.grid);
  return m;
}

inline bdg::Model contact_model(std::size_t n, double g = 1.0) {
  bdg::Model m;
  m.mu = 1.0;
  bdg::GridSpec spec;
  spec.n = n;
  m.grid = bdg::make_grid(bdg::Dimension::OneD, m.mu, spec);
  m.potential = bdg::Contact1D{g};
  return m;
}

}  // namespace fixtures
