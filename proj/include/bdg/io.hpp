#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bdg/grid.hpp"
#include "bdg/observables.hpp"
#include "bdg/state.hpp"

namespace bdg {

/// Shortest round-trip-safe text with 17 significant digits, '.' decimal, no locale.
std::string format_double(double x);

/// Two-column (x, value) text with '#' comments and blank lines skipped.
std::pair<std::vector<double>, std::vector<double>> read_two_column(const std::string& path);

inline constexpr const char* kCsvHeader =
    "t,psi_re,psi_im,abs_psi_sq,pressure_drift,s_drift,xi_norm,eta_norm,delta_norm,eq10_residual,"
    "admissibility_margin";

std::string csv_row(const ObservablesRecord& r);
void write_timeseries_csv(const std::string& path, const std::vector<ObservablesRecord>& records);

std::uint64_t fnv1a(const std::string& text);
std::string hex64(std::uint64_t value);

struct Snapshot {
  int version = 1;
  std::string config_hash;
  double t = 0.0;
  double mu = 0.0;
  double temperature = 0.0;
  double critical_temperature = 0.0;
  MomentumGrid grid;
  BdGState state;
};

inline constexpr int kSnapshotVersion = 1;

void write_snapshot(const std::string& path, const Snapshot& snap);
Snapshot read_snapshot(const std::string& path);

}  // namespace bdg
