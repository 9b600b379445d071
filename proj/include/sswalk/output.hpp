// Result tables and their CSV / NDJSON serialization.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sswalk/config.hpp"

namespace sswalk {

/// Rows are JSON objects; `columns` fixes the CSV column order. Values that
/// are null become empty CSV cells.
struct Table {
  std::vector<std::string> columns;
  std::vector<nlohmann::ordered_json> rows;
};

/// {"type": "metadata", "version": ..., "config": {...}}
nlohmann::ordered_json metadata(const ExperimentConfig& config);

/// %.17g, which round-trips every double.
std::string format_double(double v);

/// CSV: a "# <metadata json>" line, a header line, then one line per row.
/// NDJSON: the metadata object, then one object per row.
std::string render(const Table& table, OutputFormat format, const nlohmann::ordered_json& meta);

/// Writes `content` to `path` through a temporary file in the same
/// directory and a rename, or to `fallback` when no path is given. Throws
/// std::runtime_error when the file cannot be written.
void write_output(const std::optional<std::string>& path, const std::string& content, std::ostream& fallback);

}  // namespace sswalk
