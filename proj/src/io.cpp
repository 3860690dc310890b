#include "bdg/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "bdg/errors.hpp"

namespace bdg {

namespace {

double parse_double(const std::string& token, const std::string& where) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = first + token.size();
  if (token == "nan") return std::nan("");
  if (token == "inf") return INFINITY;
  if (token == "-inf") return -INFINITY;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) throw ConfigError(where + ": cannot parse number '" + token + "'");
  return v;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

std::pair<std::vector<double>, std::vector<double>> read_two_column(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open table '" + path + "'");
  std::vector<double> x, y;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string a, b, extra;
    if (!(fields >> a)) continue;
    const std::string where = path + ":" + std::to_string(lineno);
    if (!(fields >> b) || (fields >> extra)) throw ConfigError(where + ": expected two columns");
    x.push_back(parse_double(a, where));
    y.push_back(parse_double(b, where));
  }
  if (x.size() < 4) throw ConfigError(path + ": table needs at least 4 rows");
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i] > x[i - 1])) throw ConfigError(path + ": abscissae must be strictly increasing");
  return {std::move(x), std::move(y)};
}

std::string csv_row(const ObservablesRecord& r) {
  std::string row;
  for (double v : {r.t, r.psi.real(), r.psi.imag(), r.abs_psi_sq, r.pressure_drift, r.s_drift, r.xi_norm,
                   r.eta_norm, r.delta_norm, r.eq10_residual, r.admissibility_margin}) {
    if (!row.empty()) row += ',';
    row += format_double(v);
  }
  return row;
}

void write_timeseries_csv(const std::string& path, const std::vector<ObservablesRecord>& records) {
  std::ofstream out = open_out(path);
  out << kCsvHeader << '\n';
  for (const auto& r : records) out << csv_row(r) << '\n';
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t value) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << value;
  return s.str();
}

void write_snapshot(const std::string& path, const Snapshot& snap) {
  std::ofstream out = open_out(path);
  out << "bdg-snapshot " << kSnapshotVersion << '\n';
  out << "config_hash " << snap.config_hash << '\n';
  out << "t " << format_double(snap.t) << '\n';
  out << "mu " << format_double(snap.mu) << '\n';
  out << "temperature " << format_double(snap.temperature) << '\n';
  out << "critical_temperature " << format_double(snap.critical_temperature) << '\n';
  out << "[grid]\n";
  out << "dimension " << to_string(snap.grid.dimension) << '\n';
  out << "k_max " << format_double(snap.grid.k_max) << '\n';
  out << "n " << snap.grid.size() << '\n';
  out << "# node weight\n";
  for (std::size_t i = 0; i < snap.grid.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_double(snap.grid.nodes[k]) << ' ' << format_double(snap.grid.weights[k]) << '\n';
  }
  out << "[state]\n";
  out << "# gamma alpha_re alpha_im\n";
  for (std::size_t i = 0; i < snap.state.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    out << format_double(snap.state.gamma[k]) << ' ' << format_double(snap.state.alpha[k].real()) << ' '
        << format_double(snap.state.alpha[k].imag()) << '\n';
  }
  out << "end\n";
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open snapshot '" + path + "'");
  auto next_line = [&](const char* what) {
    std::string line;
    do {
      if (!std::getline(in, line)) throw ConfigError(path + ": truncated snapshot, expected " + what);
    } while (!line.empty() && line[0] == '#');
    return line;
  };
  auto keyed = [&](const std::string& key) {
    std::istringstream s(next_line(key.c_str()));
    std::string k, v;
    s >> k >> v;
    if (k != key) throw ConfigError(path + ": expected '" + key + "', found '" + k + "'");
    return v;
  };

  Snapshot snap;
  snap.version = static_cast<int>(parse_double(keyed("bdg-snapshot"), path));
  if (snap.version != kSnapshotVersion) throw ConfigError(path + ": unsupported snapshot version");
  snap.config_hash = keyed("config_hash");
  snap.t = parse_double(keyed("t"), path);
  snap.mu = parse_double(keyed("mu"), path);
  snap.temperature = parse_double(keyed("temperature"), path);
  snap.critical_temperature = parse_double(keyed("critical_temperature"), path);
  if (next_line("[grid]") != "[grid]") throw ConfigError(path + ": missing [grid]");
  snap.grid.dimension = dimension_from_string(keyed("dimension"));
  snap.grid.k_max = parse_double(keyed("k_max"), path);
  const auto n = static_cast<Eigen::Index>(parse_double(keyed("n"), path));
  snap.grid.nodes.resize(n);
  snap.grid.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::istringstream s(next_line("grid row"));
    std::string a, b;
    s >> a >> b;
    snap.grid.nodes[i] = parse_double(a, path);
    snap.grid.weights[i] = parse_double(b, path);
  }
  if (next_line("[state]") != "[state]") throw ConfigError(path + ": missing [state]");
  snap.state.gamma.resize(n);
  snap.state.alpha.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    std::istringstream s(next_line("state row"));
    std::string g, re, im;
    s >> g >> re >> im;
    snap.state.gamma[i] = parse_double(g, path);
    snap.state.alpha[i] = {parse_double(re, path), parse_double(im, path)};
  }
  if (next_line("end") != "end") throw ConfigError(path + ": missing end marker");
  return snap;
}

}  // namespace bdg
