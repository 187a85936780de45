#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace satmln {

/// UTC instant stored as seconds since the Unix epoch (1970-01-01T00:00:00Z).
/// Double resolution is ~0.2 us for 21st-century dates, far below the
/// second-level sampling this simulator works with.
struct UtcTime {
    double unix_seconds = 0.0;

    friend bool operator==(const UtcTime& a, const UtcTime& b) { return a.unix_seconds == b.unix_seconds; }
    friend bool operator!=(const UtcTime& a, const UtcTime& b) { return !(a == b); }
    friend bool operator<(const UtcTime& a, const UtcTime& b) { return a.unix_seconds < b.unix_seconds; }
    friend bool operator<=(const UtcTime& a, const UtcTime& b) { return a.unix_seconds <= b.unix_seconds; }
    friend bool operator>(const UtcTime& a, const UtcTime& b) { return b < a; }
    friend bool operator>=(const UtcTime& a, const UtcTime& b) { return b <= a; }

    UtcTime plus_seconds(double s) const { return UtcTime{unix_seconds + s}; }

    /// Seconds from other to this (positive when this is later).
    double seconds_since(const UtcTime& other) const { return unix_seconds - other.unix_seconds; }

    double to_julian_date() const { return unix_seconds / 86400.0 + 2440587.5; }

    static UtcTime from_julian_date(double jd) { return UtcTime{(jd - 2440587.5) * 86400.0}; }
};

namespace detail {

/// Days since 1970-01-01 for a proleptic Gregorian date (Howard Hinnant's
/// days_from_civil).
inline int64_t days_from_civil(int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<int64_t>(doe) - 719468;
}

/// Inverse of days_from_civil.
inline void civil_from_days(int64_t z, int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += (m <= 2);
}

}  // namespace detail

inline UtcTime make_utc(int year, int month, int day, int hour, int minute, double second) {
    const int64_t days = detail::days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day));
    return UtcTime{static_cast<double>(days) * 86400.0 + hour * 3600.0 + minute * 60.0 + second};
}

/// Parse "YYYY-MM-DD HH:MM:SS" (a 'T' separator and trailing 'Z' are also
/// accepted). Throws std::invalid_argument on malformed input.
inline UtcTime parse_utc(const std::string& text) {
    int year = 0, month = 0, day = 0, hour = 0, minute = 0;
    double second = 0.0;
    char sep = 0;
    const int n = std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%lf", &year, &month, &day, &sep, &hour, &minute, &second);
    if (n != 7 || (sep != ' ' && sep != 'T')) {
        throw std::invalid_argument("unparseable UTC timestamp: '" + text + "'");
    }
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second >= 61.0) {
        throw std::invalid_argument("out-of-range UTC timestamp field: '" + text + "'");
    }
    return make_utc(year, month, day, hour, minute, second);
}

/// ISO 8601 with whole-second resolution, e.g. "2022-08-14T01:00:00Z".
inline std::string format_utc(const UtcTime& t) {
    const double total = std::floor(t.unix_seconds + 0.5);
    int64_t days = static_cast<int64_t>(std::floor(total / 86400.0));
    int64_t sod = static_cast<int64_t>(total - static_cast<double>(days) * 86400.0);
    int64_t y;
    unsigned m, d;
    detail::civil_from_days(days, y, m, d);
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ", static_cast<long long>(y), m, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>((sod / 60) % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

}  // namespace satmln
