#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

namespace piggybank::cli {

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 1,
  kProtocolFailure = 2,
  kPatternMismatch = 3,
};

enum class Format { Json, Csv };

struct RunSpec {
  std::string command;
  std::string config_path;
  /// Overrides the config's "seed".
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_path;
  Format format = Format::Json;
  /// game-matrix only: per-trial CSV.
  std::optional<std::string> trials_out_path;
};

struct CommandResult {
  int exit_code = kSuccess;
  /// Primary output file contents (JSON or CSV).
  std::string output;
  /// Human-readable text, e.g. the game-matrix table.
  std::string console;
  /// Secondary output (per-trial CSV) when requested.
  std::string trials_output;
  /// Machine-readable error document; empty on success.
  std::string error;
};

/// Reads the config file and dispatches. Never throws.
CommandResult run(const RunSpec& spec);

/// Same, with an already-parsed config document.
CommandResult run(const RunSpec& spec, const nlohmann::json& config);

CommandResult cmd_classical(const nlohmann::json& config, const RunSpec& spec);
CommandResult cmd_quantum(const nlohmann::json& config, const RunSpec& spec);
CommandResult cmd_sweep_nm(const nlohmann::json& config, const RunSpec& spec);
CommandResult cmd_game_matrix(const nlohmann::json& config, const RunSpec& spec);
CommandResult cmd_tomography_bench(const nlohmann::json& config, const RunSpec& spec);

}  // namespace piggybank::cli
