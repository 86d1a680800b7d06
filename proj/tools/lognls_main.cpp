#include <exception>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "lognls/config.hpp"

namespace {

int guarded(int (*body)(const std::string&), const std::string& arg) {
  try {
    return body(arg);
  } catch (const lognls::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const lognls::ConstraintError& e) {
    std::cerr << "constraint error: " << e.what() << '\n';
    return 3;
  } catch (const lognls::SolverError& e) {
    std::cerr << "solver error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}

int do_run(const std::string& path) {
  lognls::RunConfig cfg = lognls::load_config(path);
  lognls::run_config(cfg);
  std::cout << "wrote " << lognls::resolve_output_dir(cfg.output_dir) << '\n';
  return 0;
}

int do_validate(const std::string& path) {
  lognls::RunConfig cfg = lognls::load_config(path);
  std::cout << "ok: " << lognls::scenario_name(cfg.scenario) << " -> "
            << lognls::resolve_output_dir(cfg.output_dir) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semiclassical logarithmic Schrodinger toolbox"};
  app.require_subcommand(1);

  std::string run_path, validate_path;
  CLI::App* run = app.add_subcommand("run", "Execute a JSON config and write reports");
  run->add_option("config", run_path, "Path to the config file")->required();
  CLI::App* list = app.add_subcommand("list", "List the available scenarios");
  CLI::App* validate = app.add_subcommand("validate", "Parse and validate a config");
  validate->add_option("config", validate_path, "Path to the config file")->required();

  CLI11_PARSE(app, argc, argv);

  if (list->parsed()) {
    for (const std::string& line : lognls::list_scenarios()) std::cout << line << '\n';
    return 0;
  }
  if (run->parsed()) return guarded(do_run, run_path);
  return guarded(do_validate, validate_path);
}
