#pragma once

#include <string>
#include <vector>

#include "json.hpp"

#include "config.hpp"

namespace lbharm::cli {

const std::vector<std::string>& command_names();

struct RunResult {
  // 0: every check passed, 1: some check failed.
  int exit_code = 0;
  nlohmann::json document;
};

/// Runs one subcommand. Configuration and precondition errors propagate as
/// exceptions (ConfigError, DomainError, DivergenceError, ...).
RunResult run(RunConfig config, const std::string& command);

/// Writes the document to config.output_path (stdout when empty) in the
/// configured format. Returns false on I/O failure.
bool write_output(const RunConfig& config, const nlohmann::json& document);

}  // namespace lbharm::cli
