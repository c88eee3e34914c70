#pragma once

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace dnl {

using json = nlohmann::json;

/// Base of every library error. `code()` is a stable machine string.
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

using Date = std::chrono::year_month_day;
using Timestamp = std::chrono::sys_seconds;

/// Strict ISO-8601 calendar date, exactly YYYY-MM-DD.
inline std::optional<Date> parse_iso_date(std::string_view s) {
    if (s.size() != 10 || s[4] != '-' || s[7] != '-') return std::nullopt;
    for (std::size_t i : {0, 1, 2, 3, 5, 6, 8, 9})
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return std::nullopt;
    auto num = [&](std::size_t pos, std::size_t len) {
        int v = 0;
        for (std::size_t i = pos; i < pos + len; ++i) v = v * 10 + (s[i] - '0');
        return v;
    };
    Date d{std::chrono::year{num(0, 4)}, std::chrono::month{unsigned(num(5, 2))},
           std::chrono::day{unsigned(num(8, 2))}};
    if (!d.ok()) return std::nullopt;
    return d;
}

inline std::string format_date(const Date& d) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", int(d.year()), unsigned(d.month()),
                  unsigned(d.day()));
    return buf;
}

inline std::string format_timestamp(Timestamp t) {
    auto days = std::chrono::floor<std::chrono::days>(t);
    Date d{days};
    std::chrono::hh_mm_ss hms{t - days};
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ", int(d.year()),
                  unsigned(d.month()), unsigned(d.day()), int(hms.hours().count()),
                  int(hms.minutes().count()), int(hms.seconds().count()));
    return buf;
}

/// Inverse of format_timestamp; accepts only the exact UTC form it emits.
inline std::optional<Timestamp> parse_timestamp(std::string_view s) {
    if (s.size() != 20 || s[10] != 'T' || s[13] != ':' || s[16] != ':' || s[19] != 'Z')
        return std::nullopt;
    auto date = parse_iso_date(s.substr(0, 10));
    if (!date) return std::nullopt;
    int parts[3];
    for (int k = 0; k < 3; ++k) {
        char a = s[11 + 3 * k], b = s[12 + 3 * k];
        if (!std::isdigit(static_cast<unsigned char>(a)) ||
            !std::isdigit(static_cast<unsigned char>(b)))
            return std::nullopt;
        parts[k] = (a - '0') * 10 + (b - '0');
    }
    if (parts[0] > 23 || parts[1] > 59 || parts[2] > 60) return std::nullopt;
    return Timestamp{std::chrono::sys_days{*date}} + std::chrono::hours{parts[0]} +
           std::chrono::minutes{parts[1]} + std::chrono::seconds{parts[2]};
}

/// Wall clock, pinned by SOURCE_DATE_EPOCH when set so that CLI and service
/// output can be reproduced byte-for-byte.
inline Timestamp now() {
    if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH"); epoch && *epoch) {
        char* end = nullptr;
        long long v = std::strtoll(epoch, &end, 10);
        if (end && *end == '\0') return Timestamp{std::chrono::seconds{v}};
    }
    return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now());
}

/// Lowercase (ASCII), trim, collapse inner whitespace runs to one space.
inline std::string normalize_title(std::string_view s) {
    std::string out;
    bool pending_space = false;
    for (unsigned char c : s) {
        if (std::isspace(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

inline bool is_blank(std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

/// Canonical JSON bytes: keys sorted, no insignificant whitespace, UTF-8.
inline std::string canonical_dump(const json& j) {
    return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

}  // namespace dnl
