#pragma once

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "satmln/time.hpp"
#include "satmln/vec3.hpp"

namespace satmln {

// Physical constants shared by the geometry kernels.
constexpr double kMuEarth = 3.986004418e14;     // m^3/s^2
constexpr double kEarthRadiusM = 6371008.8;     // mean radius, spherical model
constexpr double kPi = 3.14159265358979323846;
constexpr double kDegToRad = kPi / 180.0;
constexpr double kRadToDeg = 180.0 / kPi;

enum class Layer { Leo, Meo, Geo };

inline const char* layer_name(Layer l) {
    switch (l) {
        case Layer::Leo: return "LEO";
        case Layer::Meo: return "MEO";
        case Layer::Geo: return "GEO";
    }
    return "?";
}

/// Wrap an angle in degrees to [0, 360).
inline double wrap_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w < 0.0) w += 360.0;
    return w;
}

/// Wrap an angle in radians to [0, 2*pi).
inline double wrap_rad(double rad) {
    double w = std::fmod(rad, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    return w;
}

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Geodetic site on the spherical Earth model.
struct GeodeticCoord {
    double latitude_deg = 0.0;   // [-90, 90]
    double longitude_deg = 0.0;  // [-180, 180]
    double altitude_m = 0.0;     // >= 0, above the reference sphere

    void validate() const {
        if (latitude_deg < -90.0 || latitude_deg > 90.0)
            throw std::invalid_argument("latitude out of [-90, 90]: " + std::to_string(latitude_deg));
        if (longitude_deg < -180.0 || longitude_deg > 180.0)
            throw std::invalid_argument("longitude out of [-180, 180]: " + std::to_string(longitude_deg));
        if (altitude_m < 0.0)
            throw std::invalid_argument("negative site altitude: " + std::to_string(altitude_m));
    }
};

/// Classical orbital elements. Angles in degrees, normalized to [0, 360).
struct KeplerElements {
    double semi_major_axis_m = 0.0;
    double eccentricity = 0.0;
    double inclination_deg = 0.0;
    double raan_deg = 0.0;
    double arg_perigee_deg = 0.0;
    double mean_anomaly_epoch_deg = 0.0;
    UtcTime epoch;

    void validate() const {
        if (semi_major_axis_m <= kEarthRadiusM)
            throw std::invalid_argument("semi-major axis must exceed the Earth radius");
        if (eccentricity < 0.0 || eccentricity >= 1.0)
            throw std::invalid_argument("eccentricity out of [0, 1): " + std::to_string(eccentricity));
        if (inclination_deg < 0.0 || inclination_deg > 180.0)
            throw std::invalid_argument("inclination out of [0, 180]: " + std::to_string(inclination_deg));
    }

    /// Mean motion, rad/s.
    double mean_motion_rad_s() const {
        return std::sqrt(kMuEarth / (semi_major_axis_m * semi_major_axis_m * semi_major_axis_m));
    }

    /// Orbital period, seconds.
    double period_s() const { return 2.0 * kPi / mean_motion_rad_s(); }
};

/// Satellite identity within a constellation plus its orbital elements.
/// Ordinals are unique per layer and stable across runs.
struct SatelliteId {
    Layer layer = Layer::Leo;
    int plane = 0;
    int index_in_plane = 0;
    int ordinal = 0;
};

struct Satellite {
    SatelliteId id;
    KeplerElements elements;
};

/// Earth-centered Earth-fixed position with the instant it is valid for.
struct EcefPosition {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    UtcTime t;

    Vec3 vec() const { return {x, y, z}; }
    static EcefPosition from_vec(const Vec3& v, UtcTime t) { return {v.x, v.y, v.z, t}; }
};

/// Evenly-phased single-shell constellation description.
struct ConstellationSpec {
    Layer layer = Layer::Leo;
    int plane_count = 0;
    int sats_per_plane = 0;
    double altitude_m = 0.0;
    double inclination_deg = 0.0;
    /// Mean-anomaly shift between the first satellites of adjacent planes.
    /// Defaults to 360/(plane_count*sats_per_plane) (Walker-delta phasing).
    std::optional<double> phasing_offset_deg;
    /// Total RAAN span covered by the planes (planes at i*spread/count).
    double raan_spread_deg = 360.0;

    int total_count() const { return plane_count * sats_per_plane; }

    void validate() const {
        if (plane_count <= 0 || sats_per_plane <= 0)
            throw std::invalid_argument("constellation spec needs at least one plane and one satellite per plane");
        if (altitude_m <= 0.0)
            throw std::invalid_argument("constellation altitude must be positive");
        if (inclination_deg < 0.0 || inclination_deg > 180.0)
            throw std::invalid_argument("constellation inclination out of [0, 180]");
    }
};

// ---------------------------------------------------------------------------
// TLE ingestion
// ---------------------------------------------------------------------------

struct TleRecord {
    std::string name;
    std::string line1;
    std::string line2;
    KeplerElements parsed;
};

class TleParseError : public std::runtime_error {
public:
    explicit TleParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

/// NORAD modulo-10 checksum: digits count as themselves, '-' counts as 1.
inline int tle_checksum(const std::string& line) {
    int sum = 0;
    for (size_t i = 0; i + 1 < line.size(); ++i) {
        const char c = line[i];
        if (c >= '0' && c <= '9') sum += c - '0';
        else if (c == '-') sum += 1;
    }
    return sum % 10;
}

inline double tle_field(const std::string& line, int line_no, size_t col_start, size_t col_end,
                        const char* what) {
    // col_start/col_end are 1-based inclusive columns per the TLE convention.
    std::string field = line.substr(col_start - 1, col_end - col_start + 1);
    size_t a = field.find_first_not_of(' ');
    size_t b = field.find_last_not_of(' ');
    if (a == std::string::npos)
        throw TleParseError("TLE line " + std::to_string(line_no) + ": empty " + std::string(what) +
                            " field in columns " + std::to_string(col_start) + "-" + std::to_string(col_end));
    field = field.substr(a, b - a + 1);
    char* end = nullptr;
    const double value = std::strtod(field.c_str(), &end);
    if (end == field.c_str() || *end != '\0')
        throw TleParseError("TLE line " + std::to_string(line_no) + ": malformed " + std::string(what) +
                            " in columns " + std::to_string(col_start) + "-" + std::to_string(col_end) +
                            ": '" + field + "'");
    return value;
}

/// TLE epoch field YYDDD.DDDDDDDD -> UTC (years 57-99 are 19xx, else 20xx).
inline UtcTime tle_epoch(const std::string& line1, int line_no) {
    const int yy = static_cast<int>(tle_field(line1, line_no, 19, 20, "epoch year"));
    const double doy = tle_field(line1, line_no, 21, 32, "epoch day");
    const int year = yy >= 57 ? 1900 + yy : 2000 + yy;
    const UtcTime jan1 = make_utc(year, 1, 1, 0, 0, 0.0);
    return jan1.plus_seconds((doy - 1.0) * 86400.0);
}

}  // namespace detail

/// Parse NORAD two-line element sets. Accepts 2-line groups and 3-line
/// groups with a leading name line; blank lines between groups are skipped.
/// Mean motion is converted to a semi-major axis via mu = 3.986004418e14.
/// Throws TleParseError naming the offending input line on checksum or
/// field errors.
inline std::vector<TleRecord> parse_tle(const std::string& text) {
    std::vector<std::string> lines;
    std::vector<int> line_numbers;  // 1-based position in the input
    {
        std::string cur;
        int no = 1;
        for (size_t i = 0; i <= text.size(); ++i) {
            if (i == text.size() || text[i] == '\n') {
                if (!cur.empty() && cur.back() == '\r') cur.pop_back();
                if (cur.find_first_not_of(" \t") != std::string::npos) {
                    lines.push_back(cur);
                    line_numbers.push_back(no);
                }
                cur.clear();
                ++no;
            } else {
                cur.push_back(text[i]);
            }
        }
    }

    std::vector<TleRecord> records;
    size_t i = 0;
    while (i < lines.size()) {
        TleRecord rec;
        if (lines[i].size() < 69 || lines[i][0] != '1' || lines[i][1] != ' ') {
            rec.name = lines[i];
            // Trim trailing blanks from the name line.
            const size_t e = rec.name.find_last_not_of(' ');
            rec.name = e == std::string::npos ? std::string() : rec.name.substr(0, e + 1);
            ++i;
        }
        if (i + 1 >= lines.size())
            throw TleParseError("TLE group starting at input line " +
                                std::to_string(line_numbers[i > 0 ? i - 1 : 0]) + " is truncated");
        const std::string& l1 = lines[i];
        const std::string& l2 = lines[i + 1];
        const int n1 = line_numbers[i];
        const int n2 = line_numbers[i + 1];
        i += 2;

        if (l1.size() != 69)
            throw TleParseError("TLE line " + std::to_string(n1) + ": expected 69 characters, got " +
                                std::to_string(l1.size()));
        if (l2.size() != 69)
            throw TleParseError("TLE line " + std::to_string(n2) + ": expected 69 characters, got " +
                                std::to_string(l2.size()));
        if (l1[0] != '1')
            throw TleParseError("TLE line " + std::to_string(n1) + ": expected line number 1");
        if (l2[0] != '2')
            throw TleParseError("TLE line " + std::to_string(n2) + ": expected line number 2");
        if (detail::tle_checksum(l1) != l1[68] - '0')
            throw TleParseError("TLE line " + std::to_string(n1) + ": checksum mismatch, record rejected");
        if (detail::tle_checksum(l2) != l2[68] - '0')
            throw TleParseError("TLE line " + std::to_string(n2) + ": checksum mismatch, record rejected");
        if (l1.substr(2, 5) != l2.substr(2, 5))
            throw TleParseError("TLE lines " + std::to_string(n1) + "/" + std::to_string(n2) +
                                ": catalog numbers disagree");

        rec.line1 = l1;
        rec.line2 = l2;

        KeplerElements el;
        el.inclination_deg = detail::tle_field(l2, n2, 9, 16, "inclination");
        el.raan_deg = wrap_deg(detail::tle_field(l2, n2, 18, 25, "RAAN"));
        el.eccentricity = detail::tle_field(l2, n2, 27, 33, "eccentricity") * 1e-7;
        el.arg_perigee_deg = wrap_deg(detail::tle_field(l2, n2, 35, 42, "argument of perigee"));
        el.mean_anomaly_epoch_deg = wrap_deg(detail::tle_field(l2, n2, 44, 51, "mean anomaly"));
        const double mean_motion_rev_day = detail::tle_field(l2, n2, 53, 63, "mean motion");
        if (mean_motion_rev_day <= 0.0)
            throw TleParseError("TLE line " + std::to_string(n2) + ": non-positive mean motion");
        const double n_rad_s = mean_motion_rev_day * 2.0 * kPi / 86400.0;
        el.semi_major_axis_m = std::cbrt(kMuEarth / (n_rad_s * n_rad_s));
        el.epoch = detail::tle_epoch(l1, n1);
        el.validate();
        rec.parsed = el;
        records.push_back(std::move(rec));
    }
    return records;
}

// ---------------------------------------------------------------------------
// Constellation generation
// ---------------------------------------------------------------------------

/// Build the satellites of a single-shell constellation: planes evenly
/// spread in RAAN across raan_spread, satellites evenly spaced in mean
/// anomaly within each plane, adjacent planes phased by phasing_offset.
/// Ordinals run plane-major: ordinal = plane * sats_per_plane + index.
inline std::vector<Satellite> generate_constellation(const ConstellationSpec& spec, UtcTime epoch) {
    spec.validate();
    const double in_plane_step = 360.0 / spec.sats_per_plane;
    const double raan_step = spec.raan_spread_deg / spec.plane_count;
    const double phasing = spec.phasing_offset_deg ? *spec.phasing_offset_deg : 360.0 / spec.total_count();

    std::vector<Satellite> sats;
    sats.reserve(static_cast<size_t>(spec.total_count()));
    for (int p = 0; p < spec.plane_count; ++p) {
        for (int s = 0; s < spec.sats_per_plane; ++s) {
            Satellite sat;
            sat.id = {spec.layer, p, s, p * spec.sats_per_plane + s};
            sat.elements.semi_major_axis_m = kEarthRadiusM + spec.altitude_m;
            sat.elements.eccentricity = 0.0;
            sat.elements.inclination_deg = spec.inclination_deg;
            sat.elements.raan_deg = wrap_deg(p * raan_step);
            sat.elements.arg_perigee_deg = 0.0;
            sat.elements.mean_anomaly_epoch_deg = wrap_deg(s * in_plane_step + p * phasing);
            sat.elements.epoch = epoch;
            sat.elements.validate();
            sats.push_back(sat);
        }
    }
    return sats;
}

// ---------------------------------------------------------------------------
// Propagation
// ---------------------------------------------------------------------------

/// Solve Kepler's equation M = E - e*sin(E) for the eccentric anomaly.
/// Newton iteration from E0 = M; inputs M in radians, 0 <= e < 1.
/// The residual |E - e*sin(E) - M| of the result is below 1e-12.
inline double solve_kepler(double mean_anomaly_rad, double eccentricity) {
    if (eccentricity < 0.0 || eccentricity >= 1.0)
        throw std::invalid_argument("solve_kepler requires 0 <= e < 1");
    const double m = wrap_rad(mean_anomaly_rad);
    double e_anom = m;
    for (int iter = 0; iter < 50; ++iter) {
        const double f = e_anom - eccentricity * std::sin(e_anom) - m;
        if (std::abs(f) < 1e-13) return e_anom;
        e_anom -= f / (1.0 - eccentricity * std::cos(e_anom));
    }
    const double residual = e_anom - eccentricity * std::sin(e_anom) - m;
    if (std::abs(residual) < 1e-12) return e_anom;
    throw std::runtime_error("Kepler solver failed to converge (M=" + std::to_string(m) +
                             ", e=" + std::to_string(eccentricity) + ")");
}

/// Greenwich Mean Sidereal Time, IAU-1982 polynomial with UT1 ~= UTC.
/// Returns degrees in [0, 360).
inline double gmst_deg(UtcTime t) {
    const double d = t.to_julian_date() - 2451545.0;
    const double tc = d / 36525.0;  // Julian centuries since J2000.0
    const double g = 280.46061837 + 360.98564736629 * d + 0.000387933 * tc * tc - tc * tc * tc / 38710000.0;
    return wrap_deg(g);
}

/// Two-body position in the Earth-centered inertial frame at time t.
inline Vec3 propagate_eci(const KeplerElements& el, UtcTime t) {
    const double dt = t.seconds_since(el.epoch);
    const double m = wrap_rad(el.mean_anomaly_epoch_deg * kDegToRad + el.mean_motion_rad_s() * dt);
    const double e_anom = solve_kepler(m, el.eccentricity);

    // Perifocal coordinates.
    const double a = el.semi_major_axis_m;
    const double ecc = el.eccentricity;
    const Vec3 perifocal{a * (std::cos(e_anom) - ecc), a * std::sqrt(1.0 - ecc * ecc) * std::sin(e_anom), 0.0};

    // Perifocal -> inertial: R3(raan) * R1(incl) * R3(argp).
    Vec3 v = rotate_z(perifocal, el.arg_perigee_deg * kDegToRad);
    v = rotate_x(v, el.inclination_deg * kDegToRad);
    v = rotate_z(v, el.raan_deg * kDegToRad);
    return v;
}

/// Two-body position rotated into the Earth-fixed frame via GMST.
inline EcefPosition propagate(const KeplerElements& el, UtcTime t) {
    const Vec3 eci = propagate_eci(el, t);
    const Vec3 ecef = rotate_z(eci, -gmst_deg(t) * kDegToRad);
    return EcefPosition::from_vec(ecef, t);
}

/// The two-body model is trusted within +/-7 days of the element epoch;
/// callers surface a warning outside that window (results still computed).
inline bool propagation_is_stale(const KeplerElements& el, UtcTime t) {
    return std::abs(t.seconds_since(el.epoch)) > 7.0 * 86400.0;
}

/// Spherical-Earth geodetic -> ECEF (R = 6371.0088 km).
inline EcefPosition geodetic_to_ecef(const GeodeticCoord& site, UtcTime t = UtcTime{}) {
    site.validate();
    const double lat = site.latitude_deg * kDegToRad;
    const double lon = site.longitude_deg * kDegToRad;
    const double r = kEarthRadiusM + site.altitude_m;
    return {r * std::cos(lat) * std::cos(lon), r * std::cos(lat) * std::sin(lon), r * std::sin(lat), t};
}

/// ECEF longitude in degrees, [-180, 180].
inline double ecef_longitude_deg(const EcefPosition& p) { return std::atan2(p.y, p.x) * kRadToDeg; }

}  // namespace satmln
