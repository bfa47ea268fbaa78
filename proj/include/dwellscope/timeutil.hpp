#pragma once

#include <cstdint>
#include <string_view>

#include "dwellscope/types.hpp"

namespace dwellscope {

constexpr std::int64_t seconds_per_day = 86400;

/// Floor division (round toward negative infinity).
constexpr std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

/// Days since 1970-01-01 of the local calendar day containing t.
inline std::int64_t local_day_index(Timestamp t, std::int32_t utc_offset_s) {
    return floor_div(t + utc_offset_s, seconds_per_day);
}

/// Seconds past local midnight.
inline std::int64_t local_second_of_day(Timestamp t, std::int32_t utc_offset_s) {
    std::int64_t s = (t + utc_offset_s) % seconds_per_day;
    return s < 0 ? s + seconds_per_day : s;
}

/// Local hour of day, 0..23.
inline int local_hour(Timestamp t, std::int32_t utc_offset_s) {
    return static_cast<int>(local_second_of_day(t, utc_offset_s) / 3600);
}

/// ISO weekday of an epoch-day index: 1 = Monday .. 7 = Sunday.
int iso_weekday(std::int64_t day_index);

/// Closing-time group of a weekday. Tuesday throws closed_day.
DayGroup day_group(int iso_weekday);

/// Group of the local day containing t.
inline DayGroup day_group_of(Timestamp t, std::int32_t utc_offset_s) {
    return day_group(iso_weekday(local_day_index(t, utc_offset_s)));
}

/// Does the local day containing t fall in `group`? False for Tuesdays.
bool in_day_group(Timestamp t, std::int32_t utc_offset_s, DayGroup group);

/// "YYYY-MM-DD" -> days since epoch. Throws parse_error.
std::int64_t parse_date(std::string_view iso_date);

/// "HH:MM" or "HH:MM:SS" -> seconds past midnight. Throws parse_error.
std::int32_t parse_time_of_day(std::string_view hhmm);

/// Inverse of parse_date.
std::string format_date(std::int64_t day_index);

} // namespace dwellscope
