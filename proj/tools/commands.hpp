// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "hexwave/config.hpp"

namespace hexwave::cli {

enum ExitCode : int { kOk = 0, kInvariantFailure = 1, kConfigError = 2, kResourceRefusal = 3 };

struct RunContext {
  ExperimentConfig config;
  std::filesystem::path out_dir;
  int workers = 1;
  std::optional<std::uint64_t> seed;
  std::ostream* log = nullptr;  // progress and PASS/FAIL lines
};

int cmd_bands(const RunContext& ctx);
int cmd_dirac(const RunContext& ctx);
int cmd_envelope(const RunContext& ctx);
int cmd_edge(const RunContext& ctx);
int cmd_validate(const RunContext& ctx);
int cmd_decompose(const RunContext& ctx);

// Loads and validates the config, then dispatches. Maps library errors to exit codes
// and writes the message to `err`.
int run_command(const std::string& name, const std::filesystem::path& config_path,
                const std::optional<std::filesystem::path>& out_dir, int workers, std::optional<std::uint64_t> seed,
                std::ostream& log, std::ostream& err);

}  // namespace hexwave::cli
