#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace usfm::csv {

struct Row {
    int line = 0;  // 1-based line of the record's first character
    std::vector<std::string> fields;
};

// RFC-4180 reader: quoted fields, "" escapes, embedded newlines and commas,
// \r\n or \n record separators. Blank records are dropped. Throws
// usfm::Error("csv-syntax", ...) on an unterminated quote.
std::vector<Row> parse(std::string_view text);

std::vector<Row> read_file(const std::string& path);  // Error("unreadable-file") on failure

// Quotes only when needed (comma, quote, CR/LF, leading/trailing space).
std::string encode_field(std::string_view field);
std::string encode_row(const std::vector<std::string>& fields);

}  // namespace usfm::csv
