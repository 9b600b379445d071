#include "sswalk/output.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace sswalk {

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const nlohmann::ordered_json& v) {
  if (v.is_null()) return "";
  if (v.is_number_float()) return format_double(v.get<double>());
  if (v.is_number_integer() || v.is_number_unsigned() || v.is_boolean()) return v.dump();
  if (v.is_string()) return csv_escape(v.get<std::string>());
  return csv_escape(v.dump());
}

}  // namespace

nlohmann::ordered_json metadata(const ExperimentConfig& config) {
  nlohmann::ordered_json m;
  m["type"] = "metadata";
  m["version"] = SSWALK_VERSION;
  m["config"] = to_json(config);
  return m;
}

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string render(const Table& table, OutputFormat format, const nlohmann::ordered_json& meta) {
  std::ostringstream out;
  if (format == OutputFormat::kNdjson) {
    out << meta.dump() << '\n';
    for (const auto& row : table.rows) out << row.dump() << '\n';
    return out.str();
  }
  out << "# " << meta.dump() << '\n';
  for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (c) out << ',';
      const auto it = row.find(table.columns[c]);
      if (it != row.end()) out << csv_cell(*it);
    }
    out << '\n';
  }
  return out.str();
}

void write_output(const std::optional<std::string>& path, const std::string& content, std::ostream& fallback) {
  if (!path) {
    fallback << content;
    fallback.flush();
    return;
  }
  namespace fs = std::filesystem;
  const fs::path target(*path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot write output file '" + *path + "'");
    f << content;
    f.flush();
    if (!f) {
      std::error_code ignored;
      fs::remove(tmp, ignored);
      throw std::runtime_error("cannot write output file '" + *path + "'");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    std::error_code ignored;
    fs::remove(tmp, ignored);
    throw std::runtime_error("cannot move output into place at '" + *path + "': " + ec.message());
  }
}

}  // namespace sswalk
