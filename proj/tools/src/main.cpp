#include <iostream>

#include <CLI11.hpp>

#include "decoh/cli/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"decoh: decoherence in closed bipartite systems"};
  app.set_version_flag("--version", std::string("decoh ") + decoh::cli::kToolVersion);
  app.require_subcommand(1);

  std::string config;
  auto* run = app.add_subcommand("run", "Run the analyses of a config file");
  run->add_option("config", config, "JSON config")->required();

  auto* validate = app.add_subcommand("validate", "Check a config file without running it");
  validate->add_option("config", config, "JSON config")->required();

  bool as_json = false;
  auto* list = app.add_subcommand("list", "List scenario presets");
  list->add_flag("--json", as_json, "Machine-readable listing");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : decoh::cli::kExitConfig;
  }

  if (*run) return decoh::cli::command_run(config, std::cout, std::cerr);
  if (*validate) return decoh::cli::command_validate(config, std::cout, std::cerr);
  return decoh::cli::command_list(as_json, std::cout);
}
