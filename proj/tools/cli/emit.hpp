#pragma once

// CSV and JSON documents. Both carry the resolved run configuration, the
// conventions the numbers depend on, and the tool version.

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli/config.hpp"

namespace catqfi::cli {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolName = "catqfi";
inline constexpr const char* kToolVersion = CATQFI_VERSION;

const KeyValues& conventions();

struct Table {
  std::vector<std::string> columns;
  std::vector<Json> rows;  // objects; keys beyond `columns` only reach JSON
};

std::string render_csv(const RunConfig& cfg, const Table& t);
std::string render_json(const RunConfig& cfg, const Table& t);
std::string render(const RunConfig& cfg, const Table& t);  // by cfg.format

// Header block shared by every JSON document.
Json json_header(const RunConfig& cfg);

// "-" writes to `out`; anything else replaces the named file.
void write_output(const std::string& path, const std::string& text, std::ostream& out);

}  // namespace catqfi::cli
