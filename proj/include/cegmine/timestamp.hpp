#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace cegmine {

// Timestamps are microseconds since the Unix epoch, UTC.

// Accepts ISO-8601 ("2024-01-06", "2024-01-06T08:00:00",
// "2024-01-06 08:00:00.125Z", "2024-01-06T08:00:00+01:30") or a plain
// integer taken as microseconds. Throws DataError on anything else.
std::int64_t parse_timestamp(std::string_view text);

// Formats as "YYYY-MM-DDTHH:MM:SS.ffffffZ" (always UTC, fixed width).
std::string format_timestamp(std::int64_t micros);

}  // namespace cegmine
