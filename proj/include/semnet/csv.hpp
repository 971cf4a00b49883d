#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace semnet {

// All emitted CSVs format floats with 8 significant digits ("%.8g") and "\n"
// line endings, so identical runs produce byte-identical files.
std::string format_float(double value);

std::string format_int(std::int64_t value);

// Splits one CSV line on commas. No quoting; fields are trimmed of
// surrounding whitespace.
std::vector<std::string> split_csv_line(const std::string& line);

// Writes content verbatim (binary mode). Creates parent directories.
void write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace semnet
