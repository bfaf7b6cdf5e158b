#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace wsr {

inline constexpr int kConfigSchemaVersion = 1;

/// Command-line overrides applied on top of a config file.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
};

struct CommandOutput {
  std::string csv;
  nlohmann::json report;
  /// False if any solver run ended with a status other than converged.
  bool all_converged = true;
};

/// Subcommands: "recover", "phase-transition", "lower-bound", "bound-table".
/// Throws ConfigError for invalid configs (before any computation starts).
CommandOutput run_command(const std::string& command, const nlohmann::json& config, const RunOptions& options);

std::vector<std::string> command_names();

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

/// Shortest round-trip-safe text for CSV cells: 17 significant digits.
std::string format_double(double v);

}  // namespace wsr
