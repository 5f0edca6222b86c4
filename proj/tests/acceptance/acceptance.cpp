// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when any criterion fails.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "ssflab/validation.hpp"

int main(int argc, char** argv) {
  CLI::App app{"ssflab acceptance suite"};
  std::string config_path;
  std::string out_dir = (std::filesystem::temp_directory_path() / "ssflab-acceptance").string();
  ssflab::validation::SuiteOptions options;
  app.add_option("--config", config_path, "scenario config (JSON)");
  app.add_option("--out", out_dir, "directory for result tables");
  app.add_option("--threads", options.threads, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--only", options.only, "criterion ids to run");
  CLI11_PARSE(app, argc, argv);

  try {
    if (!config_path.empty()) options.config = ssflab::cli::load_config(config_path);
    options.out_dir = out_dir;
    options.determinism = options.only.empty();
    const auto report = ssflab::validation::run_suite(
        options, [](const ssflab::validation::CriterionResult& r) {
          std::cout << ssflab::validation::format_result(r) << std::endl;
        });
    std::size_t failed = 0;
    for (const auto& r : report.results) failed += r.passed ? 0 : 1;
    std::cout << report.results.size() - failed << "/" << report.results.size()
              << " criteria passed; tables in " << out_dir << std::endl;
    return report.passed() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "acceptance: " << e.what() << std::endl;
    return 2;
  }
}
