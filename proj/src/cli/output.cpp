#include "qbus/cli/output.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qbus/error.hpp"

namespace qbus::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::vector<std::pair<std::string, std::string>> header_fields(const RunConfig& cfg) {
  std::string units = "hbar = 1; couplings, detunings and rates are angular frequencies in the config's unit";
  if (cfg.command == "fig1") units = "time in microseconds; rates and couplings are 2*pi*MHz (rad/us)";
  return {
      {"tool", kToolVersion},
      {"command", cfg.command},
      {"engine", cfg.engine},
      {"cutoff", std::to_string(cfg.cutoff)},
      {"seed", std::to_string(cfg.seed)},
      {"tolerance", format_number(cfg.tolerance)},
      {"units", units},
      {"fidelity", "raw = |<target|psi>|^2 or <target|rho|target>; phase_corrected = (sum_i |target_i| |psi_i|)^2"},
  };
}

namespace {

std::string quote(const std::string& cell) {
  if (cell.find_first_of(",\"\n\r") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void CsvTable::add_row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  add_row(cells);
}

void CsvTable::add_row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_.size()) throw std::logic_error("CSV row width does not match the header");
  rows_.push_back(cells);
}

std::string CsvTable::render(const RunConfig& cfg) const {
  std::ostringstream os;
  for (const auto& [k, v] : header_fields(cfg)) os << "# " << k << ": " << v << "\n";
  for (const auto& [k, v] : notes_) os << "# " << k << ": " << v << "\n";
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
  os << "\n";
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << quote(row[i]);
    os << "\n";
  }
  return os.str();
}

void CsvTable::write(const std::string& path, const RunConfig& cfg) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << render(cfg);
}

void write_json_report(const std::string& path, const RunConfig& cfg, nlohmann::json body) {
  nlohmann::json doc;
  nlohmann::json header;
  for (const auto& [k, v] : header_fields(cfg)) header[k] = v;
  doc["header"] = header;
  for (auto& [k, v] : body.items()) doc[k] = v;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << doc.dump(2) << "\n";
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) throw ConfigError("cannot create output directory '" + dir + "'");
  const auto probe = std::filesystem::path(dir) / ".qbus_write_probe";
  {
    std::ofstream out(probe);
    if (!out) throw ConfigError("output directory '" + dir + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

}  // namespace qbus::cli
