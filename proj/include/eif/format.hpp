#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace eif {

// 17 significant digits, '.' decimal point regardless of locale.
std::string format_number(double v);

// Shortest text that parses back to the same double.
std::string format_shortest(double v);

// Locale-independent strict parse; throws input error naming `what`.
double parse_number(std::string_view text, std::string_view what);

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace eif
