// SPDX-License-Identifier: Apache-2.0
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hexwave: Bloch bands, Dirac points and envelope dynamics in honeycomb media"};
  app.set_version_flag("--version", std::string(HEXWAVE_VERSION));
  app.require_subcommand(1);

  std::string config;
  std::string out;
  int workers = 1;
  std::uint64_t seed = 0;

  const std::pair<const char*, const char*> commands[] = {
      {"bands", "band structure along the Gamma-K-M-Gamma path (bands.csv)"},
      {"dirac", "Dirac point, gauge-fixed modes, v_F and theta_sharp (dirac.json)"},
      {"envelope", "Dirac envelope evolution along a curved domain wall (HGR snapshots)"},
      {"edge", "edge-state dispersion across a straight wall (edge CSVs)"},
      {"validate", "wave equation vs envelope residual scaling (scaling.csv)"},
      {"decompose", "Bloch decomposition of a supercell field (decompose.csv)"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out, "output directory (overrides output.directory)");
    sub->add_option("--workers", workers, "worker threads for parallel sweeps")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized checks");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hexwave::cli::kConfigError;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  const CLI::App* sub = app.get_subcommand(name);
  std::optional<std::filesystem::path> out_dir;
  if (sub->count("--out")) out_dir = out;
  std::optional<std::uint64_t> seed_opt;
  if (sub->count("--seed")) seed_opt = seed;
  return hexwave::cli::run_command(name, config, out_dir, workers, seed_opt, std::cout, std::cerr);
}
