#ifndef SMOD_TOOLS_CLI_HPP
#define SMOD_TOOLS_CLI_HPP

#include <json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace smod::cli {

enum ExitCode : int { kOk = 0, kUnstable = 1, kInvalid = 2, kNeedsData = 3 };

const std::vector<std::string> &command_names();

struct CommandResult {
  nlohmann::json report;
  int exit_code = kOk;
};

struct RunOptions {
  std::optional<double> epsilon;     ///< overrides options.epsilon in the config
  std::optional<std::string> output; ///< overrides options.output in the config
};

/// Runs one command on a parsed config document. Never throws: every failure
/// becomes an error report with exit code 2.
CommandResult run_command(const std::string &command, const nlohmann::json &doc, const RunOptions &opts = {});

/// Reads and parses a config file, then runs the command on it.
CommandResult run_file(const std::string &command, const std::string &path, const RunOptions &opts = {});

/// Output format the report should be rendered in: the override, else the
/// config's options.output, else json.
std::string output_format(const nlohmann::json &doc, const RunOptions &opts);

/// json: two-space indented dump plus newline. text: one "Label: value" line
/// per key, nested objects indented.
std::string render(const nlohmann::json &report, const std::string &format);

/// Full command line entry point; returns the process exit code.
int main_entry(int argc, const char *const *argv, std::ostream &out, std::ostream &err);

} // namespace smod::cli

#endif
