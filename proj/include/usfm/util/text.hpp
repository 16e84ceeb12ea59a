#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace usfm {

std::string_view trim(std::string_view s);

// Trims and collapses internal whitespace runs to single spaces. Names and
// identifiers are compared in this normalized form.
std::string normalize_space(std::string_view s);

std::string to_lower(std::string_view s);

bool contains_ci(std::string_view haystack, std::string_view needle);

// Strict: whole string must be one finite decimal number.
std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

// Splits on a single-character separator, no trimming.
std::vector<std::string_view> split(std::string_view s, char sep);

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

std::string read_text_file(const std::string& path);   // Error("unreadable-file")
void write_text_file(const std::string& path, std::string_view content);  // Error("unwritable-file")

}  // namespace usfm
