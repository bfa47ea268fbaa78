#include "dwellscope/timeutil.hpp"

#include <charconv>
#include <chrono>

#include "dwellscope/error.hpp"

namespace dwellscope {

const char* to_string(DayGroup group) {
    return group == DayGroup::early_close ? "early_close" : "late_close";
}

int iso_weekday(std::int64_t day_index) {
    using namespace std::chrono;
    const sys_days d{days{day_index}};
    return static_cast<int>(weekday{d}.iso_encoding());
}

DayGroup day_group(int iso_wd) {
    switch (iso_wd) {
    case 1: // Mon
    case 4: // Thu
    case 6: // Sat
    case 7: // Sun
        return DayGroup::early_close;
    case 3: // Wed
    case 5: // Fri
        return DayGroup::late_close;
    case 2:
        throw Error(ErrorCode::closed_day, "museum is closed on Tuesdays");
    default:
        throw Error(ErrorCode::config_error, "weekday out of range");
    }
}

bool in_day_group(Timestamp t, std::int32_t utc_offset_s, DayGroup group) {
    const int wd = iso_weekday(local_day_index(t, utc_offset_s));
    if (wd == 2) return false;
    return day_group(wd) == group;
}

namespace {

int parse_int_field(std::string_view s, const char* what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw Error(ErrorCode::parse_error, std::string("bad ") + what + " in '" + std::string(s) + "'");
    return value;
}

} // namespace

std::int64_t parse_date(std::string_view iso_date) {
    if (iso_date.size() != 10 || iso_date[4] != '-' || iso_date[7] != '-')
        throw Error(ErrorCode::parse_error, "expected YYYY-MM-DD, got '" + std::string(iso_date) + "'");
    const int y = parse_int_field(iso_date.substr(0, 4), "year");
    const int m = parse_int_field(iso_date.substr(5, 2), "month");
    const int d = parse_int_field(iso_date.substr(8, 2), "day");
    using namespace std::chrono;
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok())
        throw Error(ErrorCode::parse_error, "invalid calendar date '" + std::string(iso_date) + "'");
    return sys_days{ymd}.time_since_epoch().count();
}

std::int32_t parse_time_of_day(std::string_view hhmm) {
    if (hhmm.size() != 5 && hhmm.size() != 8)
        throw Error(ErrorCode::parse_error, "expected HH:MM or HH:MM:SS, got '" + std::string(hhmm) + "'");
    if (hhmm[2] != ':' || (hhmm.size() == 8 && hhmm[5] != ':'))
        throw Error(ErrorCode::parse_error, "expected HH:MM or HH:MM:SS, got '" + std::string(hhmm) + "'");
    const int h = parse_int_field(hhmm.substr(0, 2), "hour");
    const int m = parse_int_field(hhmm.substr(3, 2), "minute");
    const int s = hhmm.size() == 8 ? parse_int_field(hhmm.substr(6, 2), "second") : 0;
    if (h < 0 || h > 23 || m < 0 || m > 59 || s < 0 || s > 59)
        throw Error(ErrorCode::parse_error, "time of day out of range '" + std::string(hhmm) + "'");
    return h * 3600 + m * 60 + s;
}

std::string format_date(std::int64_t day_index) {
    using namespace std::chrono;
    const year_month_day ymd{sys_days{days{day_index}}};
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

} // namespace dwellscope
