#include "fdiv/report.hpp"

#include <cmath>
#include <cstdio>

#include "fdiv/errors.hpp"

namespace fdv {

std::string version() { return FDIV_VERSION; }

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fmt(std::int64_t v) { return std::to_string(v); }

std::string fmt(bool v) { return v ? "true" : "false"; }

nlohmann::json json_real(double v) {
  if (std::isfinite(v)) return v;
  return fmt(v);
}

std::string csv_quote(const std::string& cell) {
  if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
  std::string q = "\"";
  for (char c : cell) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + '"';
}

CsvWriter::CsvWriter(std::ostream& out, const nlohmann::json& config,
                     std::vector<std::string> header)
    : out_(&out), width_(header.size()) {
  *out_ << "# fdiv " << version() << "\r\n# config " << config.dump() << "\r\n";
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw InvariantViolation("CSV row width does not match header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0) *out_ << ',';
    *out_ << csv_quote(cells[i]);
  }
  *out_ << "\r\n";
}

void write_json_report(std::ostream& out, const nlohmann::json& config, nlohmann::json fields) {
  nlohmann::json j = std::move(fields);
  j["version"] = version();
  j["config"] = config;
  out << j.dump(2) << "\n";
}

}  // namespace fdv
