// bdg <command> --config <path> [--out <dir>]
//
// Exit codes: 0 ok, 2 configuration error, 3 invariant failure, 4 numerical
// non-convergence.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "bdg/config.hpp"
#include "bdg/errors.hpp"
#include "bdg/experiment.hpp"
#include "bdg/parallel.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Translation-invariant BdG dynamics near T_c"};
  std::string command, config_path, out_dir = ".";
  app.add_option("command", command,
                 "tc | alphastar | equilibrium | evolve | linear-evolve | resonance | compare-gl | check-invariants")
      ->required();
  app.add_option("--config,-c", config_path, "configuration file")->required();
  app.add_option("--out,-o", out_dir, "output directory");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    bdg::parallel::configure_from_env();
    const bdg::Command cmd = bdg::command_from_string(command);
    const bdg::RunConfig config = bdg::load_config(config_path);
    const bdg::RunSummary summary = bdg::run_experiment(config, cmd, out_dir);
    std::cout << summary.to_json().dump(2) << '\n';
    if (!summary.invariants_ok()) {
      for (const auto& f : summary.failures) std::cerr << "invariant failure: " << f << '\n';
      return 3;
    }
    return 0;
  } catch (const bdg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const bdg::DomainError& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return 2;
  } catch (const bdg::InvariantViolation& e) {
    std::cerr << "invariant failure: " << e.what() << '\n';
    return 3;
  } catch (const bdg::NonConvergence& e) {
    std::cerr << "non-convergence: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
