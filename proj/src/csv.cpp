#include "usfm/util/csv.hpp"

#include <fstream>
#include <sstream>

#include "usfm/error.hpp"

namespace usfm::csv {

std::vector<Row> parse(std::string_view text) {
    std::vector<Row> rows;
    Row current;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;  // distinguishes "" record from empty-field record
    int line = 1;
    current.line = 1;

    auto end_field = [&] {
        current.fields.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_record = [&] {
        if (field_started || !field.empty() || !current.fields.empty()) {
            end_field();
            rows.push_back(std::move(current));
        }
        current = Row{};
        current.line = line;
    };

    for (size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                field += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                in_quotes = true;
                field_started = true;
                break;
            case ',':
                field_started = true;  // a comma implies at least two fields
                end_field();
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                end_record();
                break;
            default:
                field_started = true;
                field += c;
        }
    }
    if (in_quotes) throw Error("csv-syntax", "unterminated quoted field");
    end_record();
    return rows;
}

std::vector<Row> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("unreadable-file", path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
}

std::string encode_field(std::string_view field) {
    const bool needs_quotes =
        field.find_first_of(",\"\r\n") != std::string_view::npos ||
        (!field.empty() && (field.front() == ' ' || field.back() == ' '));
    if (!needs_quotes) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string encode_row(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += encode_field(fields[i]);
    }
    return out;
}

}  // namespace usfm::csv
