#include "cochange/common/time.hpp"

#include <cstdio>

#include "cochange/common/error.hpp"

namespace cochange {

Instant from_unix_seconds(std::int64_t seconds) {
    return Instant{std::chrono::seconds{seconds}};
}

std::int64_t to_unix_seconds(Instant t) {
    return t.time_since_epoch().count();
}

std::string to_iso8601(Instant t) {
    const auto day_point = std::chrono::floor<std::chrono::days>(t);
    const std::chrono::year_month_day ymd{day_point};
    const std::chrono::hh_mm_ss hms{t - day_point};
    char buf[64];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02ld:%02ld:%02ldZ", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()),
                  static_cast<long>(hms.hours().count()), static_cast<long>(hms.minutes().count()),
                  static_cast<long>(hms.seconds().count()));
    return buf;
}

Instant parse_iso8601(std::string_view text) {
    int y = 0;
    unsigned mo = 0, d = 0, h = 0, mi = 0, s = 0;
    int consumed = 0;
    const std::string copy(text);
    if (std::sscanf(copy.c_str(), "%4d-%2u-%2uT%2u:%2u:%2u%n", &y, &mo, &d, &h, &mi, &s, &consumed) != 6) {
        throw SchemaError("invalid ISO-8601 timestamp: '" + copy + "'");
    }
    const std::string_view rest = text.substr(static_cast<std::size_t>(consumed));
    if (rest != "Z" && rest != "+00:00") {
        throw SchemaError("timestamp must be UTC: '" + copy + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{mo}, std::chrono::day{d}};
    if (!ymd.ok() || h > 23 || mi > 59 || s > 60) {
        throw SchemaError("invalid ISO-8601 timestamp: '" + copy + "'");
    }
    return std::chrono::sys_days{ymd} + std::chrono::hours{h} + std::chrono::minutes{mi} + std::chrono::seconds{s};
}

}  // namespace cochange
