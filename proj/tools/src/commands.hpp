#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "config.hpp"

namespace subrig::app {

struct CommandResult {
    nlohmann::ordered_json report;
    bool pass = false;
    std::string summary; // one line for the terminal
};

const std::vector<std::string>& command_names();

/// Runs a command and writes its CSV side outputs into `out`.
/// Throws subrig::Error on configuration or numerical failure.
CommandResult run_command(std::string_view name, const RunConfig& config, const std::filesystem::path& out);

/// Writes `report.json` (two-space indent, trailing newline).
void write_report(const nlohmann::ordered_json& report, const std::filesystem::path& out);

} // namespace subrig::app
