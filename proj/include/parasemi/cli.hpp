#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "parasemi/config.hpp"
#include "parasemi/error.hpp"

namespace parasemi {

struct ExperimentConfig {
  std::string subcommand;
  Config params;
  std::filesystem::path output_dir;
  std::optional<std::uint64_t> seed;  // overrides the `seed` key
};

const std::vector<std::string>& subcommands();

/// 0 success, 1 parse/io, 2 regime/precondition and other library errors, 3 tolerance.
int exit_code(ErrorKind kind) noexcept;

/// Executes one pipeline and writes manifest.json, reports and CSVs into the
/// output directory. Errors are reported in error.json and mapped to the exit code.
int run(ExperimentConfig config);

/// Aggregates the reports in a run directory into summary.json.
int report(const std::filesystem::path& artifact_dir);

/// Entry point shared by the executable: `<sub> --config <file> --out <dir> [--seed N]`.
int cli_main(int argc, char** argv);

}  // namespace parasemi
