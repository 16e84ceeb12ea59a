#include "usfm/util/time.hpp"

#include <array>
#include <cstdio>

namespace usfm {
namespace {

// Howard Hinnant's days-from-civil; valid across the proleptic Gregorian
// calendar, which is far more range than telemetry needs.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

bool is_leap(std::int64_t y) {
    return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0;
}

unsigned days_in_month(std::int64_t y, unsigned m) {
    static constexpr std::array<unsigned, 12> lengths = {31, 28, 31, 30, 31, 30,
                                                         31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lengths[m - 1];
}

bool take_digits(std::string_view& s, int count, std::int64_t& out) {
    if (static_cast<int>(s.size()) < count) return false;
    out = 0;
    for (int i = 0; i < count; ++i) {
        const char c = s[static_cast<size_t>(i)];
        if (c < '0' || c > '9') return false;
        out = out * 10 + (c - '0');
    }
    s.remove_prefix(static_cast<size_t>(count));
    return true;
}

bool take_char(std::string_view& s, char expected) {
    if (s.empty() || s.front() != expected) return false;
    s.remove_prefix(1);
    return true;
}

}  // namespace

std::optional<Instant> parse_instant(std::string_view s) {
    std::int64_t year, month, day, hour, minute, second;
    if (!take_digits(s, 4, year)) return std::nullopt;
    if (!take_char(s, '-') || !take_digits(s, 2, month)) return std::nullopt;
    if (!take_char(s, '-') || !take_digits(s, 2, day)) return std::nullopt;
    if (s.empty() || (s.front() != 'T' && s.front() != ' ')) return std::nullopt;
    s.remove_prefix(1);
    if (!take_digits(s, 2, hour)) return std::nullopt;
    if (!take_char(s, ':') || !take_digits(s, 2, minute)) return std::nullopt;
    if (!take_char(s, ':') || !take_digits(s, 2, second)) return std::nullopt;

    std::int64_t millis = 0;
    if (!s.empty() && s.front() == '.') {
        s.remove_prefix(1);
        if (!take_digits(s, 3, millis)) return std::nullopt;
    }

    std::int64_t offset_minutes = 0;
    if (!s.empty()) {
        const char c = s.front();
        if (c == 'Z') {
            s.remove_prefix(1);
        } else if (c == '+' || c == '-') {
            s.remove_prefix(1);
            std::int64_t oh, om;
            if (!take_digits(s, 2, oh) || !take_char(s, ':') || !take_digits(s, 2, om))
                return std::nullopt;
            if (oh > 23 || om > 59) return std::nullopt;
            offset_minutes = oh * 60 + om;
            if (c == '-') offset_minutes = -offset_minutes;
        } else {
            return std::nullopt;
        }
    }
    if (!s.empty()) return std::nullopt;

    if (month < 1 || month > 12) return std::nullopt;
    if (day < 1 || day > days_in_month(year, static_cast<unsigned>(month))) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;

    const std::int64_t days =
        days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    std::int64_t ms = ((days * 24 + hour) * 60 + minute) * 60 + second;
    ms = ms * 1000 + millis;
    ms -= offset_minutes * 60 * 1000;
    return Instant{ms};
}

std::string format_instant(Instant t) {
    std::int64_t ms = t.ms;
    std::int64_t millis = ms % 1000;
    std::int64_t secs = ms / 1000;
    if (millis < 0) {
        millis += 1000;
        secs -= 1;
    }
    std::int64_t days = secs / 86400;
    std::int64_t sod = secs % 86400;
    if (sod < 0) {
        sod += 86400;
        days -= 1;
    }
    std::int64_t year;
    unsigned month, day;
    civil_from_days(days, year, month, day);

    char buf[40];
    if (millis != 0) {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lld.%03lldZ",
                      static_cast<long long>(year), month, day,
                      static_cast<long long>(sod / 3600),
                      static_cast<long long>(sod / 60 % 60),
                      static_cast<long long>(sod % 60), static_cast<long long>(millis));
    } else {
        std::snprintf(buf, sizeof buf, "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                      static_cast<long long>(year), month, day,
                      static_cast<long long>(sod / 3600),
                      static_cast<long long>(sod / 60 % 60),
                      static_cast<long long>(sod % 60));
    }
    return buf;
}

}  // namespace usfm
