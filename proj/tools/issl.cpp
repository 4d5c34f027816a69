#include <CLI11.hpp>

#include <iostream>
#include <omp.h>

#include "issl/cli/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Bilinear feedback systems: simulation, fixed-point solves and ISS certificates"};
  app.require_subcommand(1, 1);

  std::string config_path, out_dir = "out";
  std::uint64_t seed = 0;
  int jobs = omp_get_max_threads();
  app.add_option("--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  auto* seed_opt = app.add_option("--seed", seed, "Seed (overrides the config)");
  app.add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);

  for (const char* name : {"simulate", "picard", "certify", "sweep"}) app.add_subcommand(name)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : issl::cli::kConfigError;
  }

  issl::cli::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = issl::cli::load_config(config_path);
  } catch (const issl::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return issl::cli::kConfigError;
  }
  if (*seed_opt) cfg.seed = seed;
  return issl::cli::run_command(app.get_subcommands().front()->get_name(), cfg, out_dir, issl::Exec{jobs});
}
