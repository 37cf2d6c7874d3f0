#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nestfold::cli {

enum ExitCode { kPass = 0, kFinding = 1, kUsage = 2 };

struct CommandResult {
  std::string command;                // e.g. "walk gamma"
  nlohmann::ordered_json parameters = nlohmann::ordered_json::object();  // parsed options
  nlohmann::ordered_json verdicts = nlohmann::ordered_json::object();    // booleans to branch on
  nlohmann::ordered_json report;      // structured body (json commands)
  std::string payload;                // csv or svg body, empty for json commands
  std::string payload_kind = "json";  // json | csv | svg | text
  std::vector<std::string> artifacts;
  double wall_clock = 0.0;
  int exit_code = kPass;
  std::string error;
  bool with_timing = false;  // --timing; not serialized
};

// Wall-clock is left out unless asked for, so that identical inputs give
// byte-identical documents.
nlohmann::ordered_json to_json(const CommandResult& r, bool with_timing = false);
CommandResult from_json(const nlohmann::ordered_json& j);
CommandResult parse_result(std::string_view text);

// argv excludes the program name.
CommandResult run(const std::vector<std::string>& argv);

// What main writes to stdout for a result.
std::string render(const CommandResult& r);

}  // namespace nestfold::cli
