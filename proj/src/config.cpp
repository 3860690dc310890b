#include "bdg/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "bdg/errors.hpp"
#include "bdg/io.hpp"

namespace bdg {

namespace {

double to_double(const std::string& key, const std::string& value) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size() || !std::isfinite(v))
    throw ConfigError(key + ": expected a number, got '" + value + "'");
  return v;
}

long to_integer(const std::string& key, const std::string& value) {
  long v = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(key + ": expected an integer, got '" + value + "'");
  return v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true") return true;
  if (value == "false") return false;
  throw ConfigError(key + ": expected true or false, got '" + value + "'");
}

template <class F>
auto convert(const std::string& key, F&& f) {
  try {
    return f();
  } catch (const DomainError& e) {
    throw ConfigError(key + ": " + e.what());
  }
}

void require(bool ok, const std::string& key, const std::string& why) {
  if (!ok) throw ConfigError(key + ": " + why);
}

std::string strip_comments(const std::string& text) {
  std::istringstream in(text);
  std::string out, line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    out += line;
    out += '\n';
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::string s;
  for (double x : xs) {
    if (!s.empty()) s += ' ';
    s += format_double(x);
  }
  return s;
}

}  // namespace

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::Gaussian: return "gaussian";
    case PotentialKind::Tabulated: return "tabulated";
    case PotentialKind::Contact: return "contact";
    case PotentialKind::LocalGaussian: return "local-gaussian";
    case PotentialKind::LocalTabulated: return "local-tabulated";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  for (auto k : {PotentialKind::Gaussian, PotentialKind::Tabulated, PotentialKind::Contact,
                 PotentialKind::LocalGaussian, PotentialKind::LocalTabulated})
    if (to_string(k) == s) return k;
  throw DomainError("unknown potential '" + s + "'");
}

RunConfig parse_config(const std::string& text) {
  boost::property_tree::ptree tree;
  std::istringstream in(strip_comments(text));
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }

  RunConfig c;
  bool n_given = false;
  std::optional<double> tau;
  using Setter = std::function<void(const std::string&, const std::string&)>;
  const std::map<std::string, Setter> setters = {
      {"model.dimension", [&](auto& k, auto& v) { c.dimension = convert(k, [&] { return dimension_from_string(v); }); }},
      {"model.potential", [&](auto& k, auto& v) { c.potential.kind = convert(k, [&] { return potential_kind_from_string(v); }); }},
      {"model.mu", [&](auto& k, auto& v) { c.mu = to_double(k, v); }},
      {"model.amplitude", [&](auto& k, auto& v) { c.potential.amplitude = to_double(k, v); }},
      {"model.width", [&](auto& k, auto& v) { c.potential.width = to_double(k, v); }},
      {"model.coupling", [&](auto& k, auto& v) { c.potential.coupling = to_double(k, v); }},
      {"model.file", [&](auto&, auto& v) { c.potential.file = v; }},
      {"grid.n", [&](auto& k, auto& v) { c.grid.n = static_cast<std::size_t>(to_integer(k, v)); n_given = true; require(to_integer(k, v) > 0, k, "must be positive"); }},
      {"grid.k_max", [&](auto& k, auto& v) { c.grid.k_max = to_double(k, v); }},
      {"grid.clustering", [&](auto& k, auto& v) { c.grid.clustering = to_double(k, v); }},
      {"grid.panel_order", [&](auto& k, auto& v) { c.grid.panel_order = static_cast<int>(to_integer(k, v)); }},
      {"run.h", [&](auto& k, auto& v) { c.h = to_double(k, v); }},
      {"run.tau", [&](auto& k, auto& v) { tau = to_double(k, v); }},
      {"run.temperature", [&](auto& k, auto& v) { c.temperature = to_double(k, v); }},
      {"run.psi0_re", [&](auto& k, auto& v) { c.psi0.real(to_double(k, v)); }},
      {"run.psi0_im", [&](auto& k, auto& v) { c.psi0.imag(to_double(k, v)); }},
      {"run.initial", [&](auto& k, auto& v) { c.initial = convert(k, [&] { return initial_kind_from_string(v); }); }},
      {"evolve.dt", [&](auto& k, auto& v) { c.evolve.dt = to_double(k, v); }},
      {"evolve.dt_factor", [&](auto& k, auto& v) { c.evolve.dt_factor = to_double(k, v); }},
      {"evolve.t_end", [&](auto& k, auto& v) { c.evolve.t_end = to_double(k, v); }},
      {"evolve.horizon", [&](auto& k, auto& v) { c.evolve.horizon = to_double(k, v); }},
      {"evolve.observe_every", [&](auto& k, auto& v) { require(to_integer(k, v) > 0, k, "must be positive"); c.evolve.observe_every = static_cast<std::size_t>(to_integer(k, v)); }},
      {"evolve.midpoint_iters", [&](auto& k, auto& v) { c.evolve.midpoint_iters = static_cast<int>(to_integer(k, v)); }},
      {"output.csv", [&](auto&, auto& v) { c.output.csv = v; }},
      {"output.summary", [&](auto&, auto& v) { c.output.summary = v; }},
      {"output.snapshot_times", [&](auto& k, auto& v) {
         std::string list = v;
         std::replace(list.begin(), list.end(), ',', ' ');
         std::istringstream s(list);
         std::string tok;
         c.output.snapshot_times.clear();
         while (s >> tok) c.output.snapshot_times.push_back(to_double(k, tok));
       }},
      {"tdgl.c_gl", [&](auto& k, auto& v) { c.c_gl = to_double(k, v); }},
      {"resonance.theta_im", [&](auto& k, auto& v) { c.theta_im = to_double(k, v); }},
      {"resonance.rootfind", [&](auto& k, auto& v) { c.rootfind = to_bool(k, v); }},
      {"diagnostics.plateau_constant", [&](auto& k, auto& v) { c.plateau_constant = to_double(k, v); }},
      {"diagnostics.shell_delta", [&](auto& k, auto& v) { c.shell_delta = to_double(k, v); }},
  };

  std::set<std::string> seen;
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError(section + ": keys must live inside a [section]");
    for (const auto& [name, node] : body) {
      const std::string key = section + "." + name;
      const auto it = setters.find(key);
      if (it == setters.end()) throw ConfigError(key + ": unknown key");
      std::string value = node.get_value<std::string>();
      while (!value.empty() && std::isspace(static_cast<unsigned char>(value.back()))) value.pop_back();
      it->second(key, value);
      seen.insert(key);
    }
  }
  for (const char* key : {"model.potential", "model.mu", "run.h"})
    if (!seen.count(key)) throw ConfigError(std::string(key) + ": required key missing");

  if (!n_given && c.dimension == Dimension::OneD) c.grid.n = 4096;
  require(c.mu > 0, "model.mu", "must be positive");
  require(c.h > 0, "run.h", "must be positive");
  require(c.potential.width > 0, "model.width", "must be positive");
  require(c.potential.coupling > 0, "model.coupling", "must be positive");
  if (c.temperature) {
    require(!tau, "run.temperature", "give either run.temperature or run.tau, not both");
    require(*c.temperature > 0, "run.temperature", "must be positive");
  }
  if (tau) {
    require(std::abs(*tau) <= 1.0, "run.tau",
            "|tau| <= 1 is required so that |T - T_c| <= h^2 (got " + format_double(*tau) + ")");
    c.tau = *tau;
  }
  const bool tabulated = c.potential.kind == PotentialKind::Tabulated ||
                         c.potential.kind == PotentialKind::LocalTabulated;
  if (tabulated) require(!c.potential.file.empty(), "model.file", "required for tabulated potentials");
  if (c.potential.kind == PotentialKind::Contact)
    require(c.dimension == Dimension::OneD, "model.potential", "contact requires dimension = 1d");
  if (c.potential.kind == PotentialKind::LocalGaussian || c.potential.kind == PotentialKind::LocalTabulated)
    require(c.dimension == Dimension::ThreeDRadial, "model.potential", "local potentials require dimension = 3d");
  require(c.grid.k_max >= 0, "grid.k_max", "must be nonnegative (0 selects 6 sqrt(mu))");
  require(c.grid.clustering > 0, "grid.clustering", "must be positive");
  require(c.grid.panel_order == 8 || c.grid.panel_order == 16 || c.grid.panel_order == 32,
          "grid.panel_order", "must be 8, 16 or 32");
  if (c.evolve.dt) require(*c.evolve.dt > 0, "evolve.dt", "must be positive");
  require(c.evolve.dt_factor > 0 && c.evolve.dt_factor <= 0.5, "evolve.dt_factor", "must lie in (0, 0.5]");
  if (c.evolve.t_end) require(*c.evolve.t_end >= 0, "evolve.t_end", "must be nonnegative");
  require(c.evolve.horizon > 0, "evolve.horizon", "must be positive");
  require(c.evolve.midpoint_iters >= 0, "evolve.midpoint_iters", "must be nonnegative");
  require(c.c_gl > 0, "tdgl.c_gl", "must be positive");
  require(c.theta_im < 0, "resonance.theta_im", "must be negative");
  require(c.plateau_constant > 0, "diagnostics.plateau_constant", "must be positive");
  if (c.shell_delta)
    require(*c.shell_delta > 0 && *c.shell_delta < std::sqrt(c.mu), "diagnostics.shell_delta",
            "must lie in (0, sqrt(mu))");
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string emit_config(const RunConfig& c) {
  std::ostringstream o;
  o << "[model]\n";
  o << "dimension = " << to_string(c.dimension) << '\n';
  o << "potential = " << to_string(c.potential.kind) << '\n';
  o << "mu = " << format_double(c.mu) << '\n';
  o << "amplitude = " << format_double(c.potential.amplitude) << '\n';
  o << "width = " << format_double(c.potential.width) << '\n';
  o << "coupling = " << format_double(c.potential.coupling) << '\n';
  if (!c.potential.file.empty()) o << "file = " << c.potential.file << '\n';
  o << "\n[grid]\n";
  o << "n = " << c.grid.n << '\n';
  o << "k_max = " << format_double(c.grid.k_max) << '\n';
  o << "clustering = " << format_double(c.grid.clustering) << '\n';
  o << "panel_order = " << c.grid.panel_order << '\n';
  o << "\n[run]\n";
  o << "h = " << format_double(c.h) << '\n';
  if (c.temperature) o << "temperature = " << format_double(*c.temperature) << '\n';
  else o << "tau = " << format_double(c.tau) << '\n';
  o << "psi0_re = " << format_double(c.psi0.real()) << '\n';
  o << "psi0_im = " << format_double(c.psi0.imag()) << '\n';
  o << "initial = " << to_string(c.initial) << '\n';
  o << "\n[evolve]\n";
  if (c.evolve.dt) o << "dt = " << format_double(*c.evolve.dt) << '\n';
  o << "dt_factor = " << format_double(c.evolve.dt_factor) << '\n';
  if (c.evolve.t_end) o << "t_end = " << format_double(*c.evolve.t_end) << '\n';
  o << "horizon = " << format_double(c.evolve.horizon) << '\n';
  o << "observe_every = " << c.evolve.observe_every << '\n';
  o << "midpoint_iters = " << c.evolve.midpoint_iters << '\n';
  o << "\n[output]\n";
  if (!c.output.csv.empty()) o << "csv = " << c.output.csv << '\n';
  if (!c.output.summary.empty()) o << "summary = " << c.output.summary << '\n';
  if (!c.output.snapshot_times.empty()) o << "snapshot_times = " << join(c.output.snapshot_times) << '\n';
  o << "\n[tdgl]\n";
  o << "c_gl = " << format_double(c.c_gl) << '\n';
  o << "\n[resonance]\n";
  o << "theta_im = " << format_double(c.theta_im) << '\n';
  o << "rootfind = " << (c.rootfind ? "true" : "false") << '\n';
  o << "\n[diagnostics]\n";
  o << "plateau_constant = " << format_double(c.plateau_constant) << '\n';
  if (c.shell_delta) o << "shell_delta = " << format_double(*c.shell_delta) << '\n';
  return o.str();
}

}  // namespace bdg
