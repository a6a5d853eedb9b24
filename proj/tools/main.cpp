#include <iostream>

#include <CLI11.hpp>

#include "run_config.hpp"

using namespace donaldson::cli;

int main(int argc, char** argv) {
  CLI::App app{"Donaldson metric experiments on the flat 4-torus"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<std::string> out_dir;

  const char* names[] = {"check", "energy", "flow", "geodesic", "hessian"};
  const char* help[] = {"run the invariant suite and write check_report.txt",
                        "evaluate energy and gradient of the initial form",
                        "integrate the negative gradient flow",
                        "integrate a geodesic of the Donaldson metric",
                        "evaluate the Hessian on each perturbation"};
  for (int i = 0; i < 5; ++i) {
    CLI::App* sub = app.add_subcommand(names[i], help[i]);
    sub->add_option("--config", config_path, "JSON configuration file")->required();
    sub->add_option("--grid", grid, "override grid_n");
    sub->add_option("--tol", tol, "override solver.rel_tol");
    sub->add_option("--out", out_dir, "override output_dir");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  const Experiment experiment = parse_experiment(app.get_subcommands().front()->get_name());
  RunConfig config;
  try {
    config = load_config(config_path);
    if (config.experiment && *config.experiment != experiment) {
      throw ConfigError(std::string("config is for experiment '") +
                        to_string(*config.experiment) + "', not '" + to_string(experiment) +
                        "'");
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  if (grid) config.grid_n = *grid;
  if (tol) config.solver.rel_tol = *tol;
  if (out_dir) config.output_dir = *out_dir;

  return run(experiment, config, std::cout);
}
