// tunneltimes: sweeps, figure data, packet runs and the invariant suite.
//
//   tunneltimes times --wl 12.566 --n-min 0.1 --n-max 0.9 --n-steps 9
//   tunneltimes packet --config run.cfg --out packet.csv
//   tunneltimes verify

#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "tunneltimes/commands.hpp"
#include "tunneltimes/errors.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Tunneling times of a rectangular barrier"};
  app.set_version_flag("--version", "tunneltimes 1.0");

  std::string command;
  std::string config_path;
  app.add_option("command", command, "times | figure1 | figure2 | packet | scan | verify")
      ->required()
      ->check(CLI::IsMember({"times", "figure1", "figure2", "packet", "scan", "verify"}));
  app.add_option("--config", config_path, "key = value file; flags override it");

  // every setting is kept as text and applied through the config parser, so
  // flags and files accept exactly the same values
  const std::vector<std::pair<std::string, std::string>> settings{
      {"--wl", "barrier strength times width, wL"},
      {"--n-min", "first n = k^2/w^2 of the sweep"},
      {"--n-max", "last n of the sweep"},
      {"--n-steps", "number of sweep points (>= 2)"},
      {"--sigma-rel", "packet width sigma_k / k0"},
      {"--delta", "momentum cutoff: g = 0 for k >= (1 - delta) w"},
      {"--sym", "plus | minus | single"},
      {"--norm", "abs | tauk | tauw"},
      {"--out", "output CSV path (default: standard output)"},
      {"--seed", "seed for randomized test points"},
      {"--n0", "packet central n"},
      {"--figure1-n", "comma-separated n values for figure1"},
      {"--alpha-min", "figure1 smallest alpha"},
      {"--alpha-max", "figure1 largest alpha"},
      {"--series", "allow n within 1e-6 of 1 (true/false)"},
      {"--theta-variant", "rho_l | two_rho_l (verify)"},
  };
  std::vector<std::string> values(settings.size());
  std::vector<CLI::Option*> options;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    options.push_back(app.add_option(settings[i].first, values[i], settings[i].second));
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    tunneltimes::RunConfig cfg;
    if (!config_path.empty()) tunneltimes::apply_config_file(cfg, config_path);
    cfg.command = tunneltimes::parse_command(command);
    for (std::size_t i = 0; i < settings.size(); ++i) {
      if (options[i]->count() > 0) tunneltimes::apply_setting(cfg, settings[i].first.substr(2), values[i]);
    }
    tunneltimes::validate(cfg);
    return tunneltimes::run(cfg, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "tunneltimes " << command << ": " << e.what() << '\n';
    return tunneltimes::exit_code_for(e);
  }
}
