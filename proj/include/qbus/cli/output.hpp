#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "qbus/cli/config.hpp"

namespace qbus::cli {

/// Locale-independent shortest round-trip-safe formatting ("nan" for NaN).
std::string format_number(double v);

/// "# key: value" lines shared by every CSV and the JSON "header" object.
std::vector<std::pair<std::string, std::string>> header_fields(const RunConfig& cfg);

/// Buffered CSV table written in one go; quoting follows RFC 4180.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  void add_note(std::string key, std::string value) { notes_.emplace_back(std::move(key), std::move(value)); }
  void add_row(const std::vector<double>& values);
  void add_row(const std::vector<std::string>& cells);
  std::size_t rows() const { return rows_.size(); }

  std::string render(const RunConfig& cfg) const;
  void write(const std::string& path, const RunConfig& cfg) const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> notes_;
  std::vector<std::vector<std::string>> rows_;
};

/// Write {"header": ..., <body keys>} with a trailing newline.
void write_json_report(const std::string& path, const RunConfig& cfg, nlohmann::json body);

/// Create the directory (and parents) if needed; ConfigError when not writable.
void ensure_output_dir(const std::string& dir);

}  // namespace qbus::cli
