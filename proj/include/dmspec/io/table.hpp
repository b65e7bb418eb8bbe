#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dmspec::io {

/// Tabular result of one command. Cells are JSON scalars (number, string,
/// boolean or null) so that both encodings carry the same values.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;
};

struct Report {
  std::string command;
  nlohmann::json summary = nlohmann::json::object();
  Table table;
};

/// Header row plus one line per row, RFC 4180 quoting, numbers as %.17g,
/// null as an empty field. Lines end in CRLF.
std::string to_csv(const Table& table);
/// Inverse of to_csv; every field comes back as a string.
std::vector<std::vector<std::string>> parse_csv(const std::string& text);

/// {"command": ..., "summary": {...}, "columns": [...], "rows": [[...], ...]}
nlohmann::json to_json(const Report& report);
Report report_from_json(const nlohmann::json& j);

/// "%.17g" text, which reads back as the same double; nan and ±inf spelled out.
std::string format_number(double x);

}  // namespace dmspec::io
