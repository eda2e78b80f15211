#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace imgtn::cli {

inline constexpr const char* tool_name = "imgtn";
inline constexpr const char* tool_version = "0.1.0";

enum exit_code : int { exit_ok = 0, exit_verification = 1, exit_input = 2 };

using Json = nlohmann::ordered_json;

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<Json>> rows;
};

/// Everything a subcommand reports. The config echo lets a reader rerun the report.
struct Report {
    Json config = Json::object();
    std::vector<std::pair<std::string, Json>> summary;
    std::vector<std::string> notes;
    std::vector<Table> tables;
};

/// `# table: <name>` blocks separated by blank lines, preceded by `#` header lines.
std::string render_csv(const Report& report);
std::string render_json(const Report& report);

/// Runs one command line (without the program name). Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace imgtn::cli
