#pragma once

#include <cstdint>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace usfm {

// Millisecond instant on the UTC timeline. All timestamps are normalized to
// UTC at parse time; naive timestamps (no zone suffix) are taken as UTC.
struct Instant {
    std::int64_t ms = 0;
    auto operator<=>(const Instant&) const = default;
};

// Half-open interval [start, end). end <= start denotes an empty window.
struct TimeWindow {
    Instant start;
    Instant end;

    bool contains(Instant t) const { return start <= t && t < end; }
    bool empty() const { return end <= start; }
};

// Accepts ISO-8601 "YYYY-MM-DDTHH:MM:SS[.fff][Z|+HH:MM|-HH:MM]"; a space may
// stand in for the 'T'. Returns nullopt on any malformation, including
// out-of-range calendar fields.
std::optional<Instant> parse_instant(std::string_view text);

// "YYYY-MM-DDTHH:MM:SSZ", with ".fff" inserted only when the millisecond
// component is nonzero. format/parse round-trip exactly over the four-digit
// year range 0001-01-01 .. 9999-12-31.
std::string format_instant(Instant t);

}  // namespace usfm
