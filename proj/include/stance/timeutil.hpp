#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace stance {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

/// `YYYY-MM-DDTHH:MM:SS[.frac](Z|+HH:MM|-HH:MM)`; fractional seconds are truncated.
/// Also accepts a bare `YYYY-MM-DD` (midnight UTC). Throws ParseError.
Timestamp parse_rfc3339(std::string_view text);

/// Twitter API layout: `Wed Oct 22 15:29:17 +0000 2014`. Throws ParseError.
Timestamp parse_twitter_time(std::string_view text);

/// Always `YYYY-MM-DDTHH:MM:SSZ`.
std::string format_rfc3339(Timestamp t);

/// `YYYY-MM-DD` of the UTC day containing t.
std::string format_date(Timestamp t);

/// Whole days from `from` to `to` (floor), may be negative.
std::int64_t days_between(Timestamp from, Timestamp to) noexcept;

}  // namespace stance
