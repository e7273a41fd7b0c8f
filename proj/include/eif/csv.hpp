#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eif {

// Quotes a field when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);
std::string csv_row(const std::vector<std::string>& fields);

// Parses numeric rows; blank lines are skipped, a header row is skipped when
// its first field is not a number. Input error names the offending line.
std::vector<std::vector<double>> read_numeric_csv(const std::string& path);

// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace eif
