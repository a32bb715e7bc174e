// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace hexwave {

// RFC 4180 writer. Numbers are written with %.17g so that they round-trip.
class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path);

  CsvWriter& header(const std::vector<std::string>& names);
  CsvWriter& field(std::string_view text);
  CsvWriter& field(double value);
  CsvWriter& field(long long value);
  CsvWriter& field(int value) { return field(static_cast<long long>(value)); }
  CsvWriter& end_row();

 private:
  std::ofstream out_;
  bool row_started_ = false;
};

std::string format_double(double v);
std::string csv_escape(std::string_view text);

// Minimal RFC 4180 reader (quoted fields, doubled quotes, CRLF or LF).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& path);

}  // namespace hexwave
