#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

namespace fdv {

std::string version();

// Full-precision real: 17 significant digits, "inf"/"-inf"/"nan" otherwise.
std::string fmt(double v);
std::string fmt(std::int64_t v);
std::string fmt(bool v);

// JSON number, or the string "inf" for non-finite values.
nlohmann::json json_real(double v);

/*
 * RFC-4180 CSV. Two comment lines carry the artifact version and the config
 * echo, then the mandatory header row.
 *
 *   # fdiv <version>
 *   # config <compact json>
 *   col1,col2,...
 */
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const nlohmann::json& config, std::vector<std::string> header);
  void row(const std::vector<std::string>& cells);

 private:
  std::ostream* out_;
  std::size_t width_;
};

std::string csv_quote(const std::string& cell);

// {"version": ..., "config": ..., <fields>} with a trailing newline.
void write_json_report(std::ostream& out, const nlohmann::json& config, nlohmann::json fields);

}  // namespace fdv
