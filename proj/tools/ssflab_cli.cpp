#include <iostream>

#include "CLI11.hpp"
#include "ssflab/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finite-volume spectral shift function experiments"};
  app.require_subcommand(1, 1);
  std::string config_path;
  std::string out_dir = ".";
  long long seed = -1;
  int threads = 1;
  long long oracle_cap = -1;
  app.add_option("--config", config_path, "Scenario config (JSON); built-in d=1 default if omitted");
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--seed", seed, "Overrides mc.seed")->check(CLI::NonNegativeNumber);
  app.add_option("--threads", threads, "Worker threads (speed only)")->check(CLI::PositiveNumber);
  app.add_option("--oracle-cap", oracle_cap, "Largest dimension for dense spectra")
      ->check(CLI::PositiveNumber);
  // Global options may also follow the subcommand name.
  for (const auto& name : ssflab::cli::subcommand_names()) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  ssflab::cli::ScenarioConfig config;
  try {
    if (!config_path.empty()) config = ssflab::cli::load_config(config_path);
    if (seed >= 0) config.mc.seed = static_cast<std::uint64_t>(seed);
    if (oracle_cap > 0) config.oracle_cap = static_cast<std::size_t>(oracle_cap);
    ssflab::cli::validate(config);
  } catch (const ssflab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  }

  ssflab::cli::RunOptions options;
  options.out_dir = out_dir;
  options.threads = threads;
  options.config_source = config_path.empty() ? "<built-in default>" : config_path;
  try {
    return ssflab::cli::run_subcommand(app.get_subcommands().front()->get_name(), config, options);
  } catch (const ssflab::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
