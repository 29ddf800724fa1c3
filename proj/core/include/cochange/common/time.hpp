#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>

namespace cochange {

/// UTC instant at one-second resolution (git timestamps are whole seconds).
using Instant = std::chrono::sys_seconds;
using Days = std::chrono::days;

Instant from_unix_seconds(std::int64_t seconds);
std::int64_t to_unix_seconds(Instant t);

/// Formats as "YYYY-MM-DDTHH:MM:SSZ".
std::string to_iso8601(Instant t);

/// Parses "YYYY-MM-DDTHH:MM:SSZ" (a trailing "Z" or "+00:00" is accepted).
/// Throws SchemaError on anything else.
Instant parse_iso8601(std::string_view text);

/// Half-open interval [begin, end).
struct TimeRange {
    Instant begin;
    Instant end;

    [[nodiscard]] bool contains(Instant t) const noexcept { return begin <= t && t < end; }
    [[nodiscard]] bool empty() const noexcept { return end <= begin; }
};

inline constexpr Instant kDistantPast = Instant{std::chrono::seconds{-(std::int64_t{1} << 40)}};
inline constexpr Instant kDistantFuture = Instant{std::chrono::seconds{std::int64_t{1} << 40}};

}  // namespace cochange
