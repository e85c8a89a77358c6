#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dnaood {

// Minimal CSV handling for the toolkit's own formats: fields are plain
// tokens, no quoting or embedded commas.
std::vector<std::string> split_csv_line(std::string_view line);

// Shortest round-trip decimal representation (via std::to_chars), so equal
// doubles always serialize to identical bytes. Infinity prints as "inf".
std::string format_double(double value);

// Strict double parser; returns false on trailing junk or empty input.
bool parse_double(std::string_view text, double& out);

std::vector<std::string> read_lines(const std::string& path);

void write_file(const std::string& path, std::string_view content);

}  // namespace dnaood
