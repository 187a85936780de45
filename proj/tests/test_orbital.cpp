#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include "satmln/orbital.hpp"

using namespace satmln;
using Catch::Approx;

namespace {

// --- Test-only oracles -----------------------------------------------------

/// Bisection solver for E - e*sin(E) = M on [0, 2*pi]; independent of the
/// Newton implementation under test.
double kepler_bisection_oracle(double m, double e) {
    double lo = 0.0, hi = 2.0 * kPi;
    auto f = [&](double x) { return x - e * std::sin(x) - m; };
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

/// Second, independently written TLE field extraction (fixed-width C
/// buffers instead of substring parsing).
struct TleFieldsOracle {
    double incl_deg, ecc, mean_motion_rev_day;
};

TleFieldsOracle extract_tle_fields_oracle(const std::string& line2) {
    char buf[16];
    TleFieldsOracle out{};
    std::snprintf(buf, sizeof(buf), "%.8s", line2.c_str() + 8);
    out.incl_deg = std::atof(buf);
    std::snprintf(buf, sizeof(buf), "0.%.7s", line2.c_str() + 26);
    out.ecc = std::atof(buf);
    std::snprintf(buf, sizeof(buf), "%.11s", line2.c_str() + 52);
    out.mean_motion_rev_day = std::atof(buf);
    return out;
}

double semi_major_from_mean_motion_oracle(double rev_per_day) {
    const double n = rev_per_day * 2.0 * kPi / 86400.0;
    return std::cbrt(3.986004418e14 / (n * n));
}

int checksum_oracle(const std::string& first68) {
    int sum = 0;
    for (char c : first68) {
        if (c >= '0' && c <= '9') sum += c - '0';
        if (c == '-') sum += 1;
    }
    return sum % 10;
}

/// Test-only TLE renderer for round-trip checks.
std::string render_tle(const KeplerElements& el, int catalog, const std::string& name) {
    // Epoch -> YYDDD.DDDDDDDD
    const double jd = el.epoch.to_julian_date();
    int64_t y;
    unsigned mo, d;
    const double unix_s = el.epoch.unix_seconds;
    const int64_t days = static_cast<int64_t>(std::floor(unix_s / 86400.0));
    detail::civil_from_days(days, y, mo, d);
    const UtcTime jan1 = make_utc(static_cast<int>(y), 1, 1, 0, 0, 0.0);
    const double doy = (unix_s - jan1.unix_seconds) / 86400.0 + 1.0;
    (void)jd;

    const double n_rev_day = 86400.0 / el.period_s();
    char l1[80], l2[80];
    std::snprintf(l1, sizeof(l1), "1 %05dU 00001A   %02d%012.8f  .00000000  00000-0  00000-0 0    0",
                  catalog, static_cast<int>(y % 100), doy);
    std::snprintf(l2, sizeof(l2), "2 %05d %8.4f %8.4f %07d %8.4f %8.4f %11.8f%5d", catalog,
                  el.inclination_deg, el.raan_deg,
                  static_cast<int>(std::lround(el.eccentricity * 1e7)), el.arg_perigee_deg,
                  el.mean_anomaly_epoch_deg, n_rev_day, 1);
    std::string line1(l1), line2(l2);
    REQUIRE(line1.size() == 68);
    REQUIRE(line2.size() == 68);
    line1 += static_cast<char>('0' + checksum_oracle(line1));
    line2 += static_cast<char>('0' + checksum_oracle(line2));
    return name + "\n" + line1 + "\n" + line2 + "\n";
}

// Reference ISS element set (the widely mirrored 2008 example).
const char* kIssTle =
    "ISS (ZARYA)\n"
    "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  2927\n"
    "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391563537\n";

}  // namespace

TEST_CASE("solve_kepler handles circular and symmetric cases") {
    CHECK(solve_kepler(1.234, 0.0) == Approx(1.234).margin(1e-14));
    CHECK(solve_kepler(kPi, 0.3) == Approx(kPi).margin(1e-12));
}

TEST_CASE("solve_kepler matches the bisection oracle") {
    const double oracle = kepler_bisection_oracle(1.0, 0.5);
    CHECK(oracle == Approx(1.49870113).margin(1e-8));  // frozen from the oracle
    CHECK(solve_kepler(1.0, 0.5) == Approx(oracle).margin(1e-10));
}

TEST_CASE("solve_kepler inverts E - e*sin(E) to 1e-12 on random inputs") {
    std::mt19937 gen(42);
    std::uniform_real_distribution<double> m_dist(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> e_dist(0.0, 0.9);
    for (int i = 0; i < 1000; ++i) {
        const double m = m_dist(gen);
        const double e = e_dist(gen);
        const double ea = solve_kepler(m, e);
        CHECK(std::abs(ea - e * std::sin(ea) - m) < 1e-12);
    }
}

TEST_CASE("solve_kepler rejects invalid eccentricity") {
    CHECK_THROWS_AS(solve_kepler(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(solve_kepler(1.0, -0.1), std::invalid_argument);
}

TEST_CASE("parse_tle reads the reference ISS element set") {
    const auto records = parse_tle(kIssTle);
    REQUIRE(records.size() == 1);
    const auto& rec = records[0];
    CHECK(rec.name == "ISS (ZARYA)");

    const auto oracle = extract_tle_fields_oracle(rec.line2);
    const double a_oracle = semi_major_from_mean_motion_oracle(oracle.mean_motion_rev_day);
    CHECK(rec.parsed.semi_major_axis_m == Approx(a_oracle).epsilon(1e-6));
    CHECK(rec.parsed.eccentricity == Approx(oracle.ecc).epsilon(1e-6));
    CHECK(rec.parsed.inclination_deg == Approx(oracle.incl_deg).epsilon(1e-6));

    // Spot values implied by the printed fields.
    CHECK(rec.parsed.eccentricity == Approx(0.0006703).margin(1e-10));
    CHECK(rec.parsed.raan_deg == Approx(247.4627).margin(1e-9));
    CHECK(rec.parsed.arg_perigee_deg == Approx(130.5360).margin(1e-9));
    CHECK(rec.parsed.mean_anomaly_epoch_deg == Approx(325.0288).margin(1e-9));

    // Epoch: day 264.51782528 of 2008.
    const UtcTime expected = make_utc(2008, 1, 1, 0, 0, 0.0).plus_seconds((264.51782528 - 1.0) * 86400.0);
    CHECK(rec.parsed.epoch.unix_seconds == Approx(expected.unix_seconds).margin(1e-3));
}

TEST_CASE("parse_tle rejects a corrupted checksum naming the line") {
    std::string text = kIssTle;
    // Bump the line-1 checksum digit by one (mod 10).
    const size_t l1_end = text.find('\n', text.find('\n') + 1) - 1;
    text[l1_end] = text[l1_end] == '9' ? '0' : text[l1_end] + 1;
    CHECK_THROWS_WITH(parse_tle(text), Catch::Matchers::ContainsSubstring("checksum") &&
                                           Catch::Matchers::ContainsSubstring("line 2"));
}

TEST_CASE("parse_tle rejects malformed numeric fields naming the columns") {
    std::string text = kIssTle;
    const size_t l2_start = text.find("\n2 ") + 1;
    text[l2_start + 10] = 'x';  // inside the inclination field, columns 9-16
    // Fix up the checksum so the field error is what surfaces.
    const size_t l2_end = l2_start + 68;
    std::string body = text.substr(l2_start, 68);
    text[l2_end] = static_cast<char>('0' + checksum_oracle(body));
    CHECK_THROWS_WITH(parse_tle(text), Catch::Matchers::ContainsSubstring("columns 9-16"));
}

TEST_CASE("parse_tle rejects disagreeing catalog numbers") {
    std::string text = kIssTle;
    const size_t l2_start = text.find("\n2 ") + 1;
    text.replace(l2_start + 2, 5, "25545");
    std::string body = text.substr(l2_start, 68);
    text[l2_start + 68] = static_cast<char>('0' + checksum_oracle(body));
    CHECK_THROWS_WITH(parse_tle(text), Catch::Matchers::ContainsSubstring("catalog"));
}

TEST_CASE("parse_tle of empty input yields an empty list") {
    CHECK(parse_tle("").empty());
    CHECK(parse_tle("\n  \n").empty());
}

TEST_CASE("TLE round-trip through the test renderer") {
    std::mt19937 gen(7);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        KeplerElements el;
        el.semi_major_axis_m = 6800e3 + 36000e3 * u01(gen);
        el.eccentricity = 0.2 * u01(gen);
        el.inclination_deg = 180.0 * u01(gen);
        el.raan_deg = 359.99 * u01(gen);
        el.arg_perigee_deg = 359.99 * u01(gen);
        el.mean_anomaly_epoch_deg = 359.99 * u01(gen);
        el.epoch = make_utc(2022, 8, 14, 1, 0, 0.0).plus_seconds(86400.0 * 300.0 * u01(gen));

        const auto records = parse_tle(render_tle(el, 10000 + i, "SYN-" + std::to_string(i)));
        REQUIRE(records.size() == 1);
        const auto& back = records[0].parsed;
        CHECK(back.semi_major_axis_m == Approx(el.semi_major_axis_m).epsilon(1e-6));
        CHECK(back.eccentricity == Approx(el.eccentricity).margin(1e-7));
        CHECK(back.inclination_deg == Approx(el.inclination_deg).margin(1e-4));
        CHECK(back.raan_deg == Approx(el.raan_deg).margin(1e-4));
        CHECK(back.arg_perigee_deg == Approx(el.arg_perigee_deg).margin(1e-4));
        CHECK(back.mean_anomaly_epoch_deg == Approx(el.mean_anomaly_epoch_deg).margin(1e-4));
        CHECK(back.epoch.unix_seconds == Approx(el.epoch.unix_seconds).margin(1e-2));
    }
}

TEST_CASE("generate_constellation builds the 6x13 polar shell") {
    const ConstellationSpec spec{Layer::Leo, 6, 13, 1015e3, 98.98, std::nullopt, 180.0};
    const auto sats = generate_constellation(spec, make_utc(2022, 8, 14, 1, 0, 0.0));
    REQUIRE(sats.size() == 78);

    // In-plane spacing 360/13 deg in mean anomaly.
    for (int p = 0; p < 6; ++p) {
        for (int s = 0; s + 1 < 13; ++s) {
            const auto& a = sats[p * 13 + s].elements;
            const auto& b = sats[p * 13 + s + 1].elements;
            const double gap = wrap_deg(b.mean_anomaly_epoch_deg - a.mean_anomaly_epoch_deg);
            CHECK(gap == Approx(360.0 / 13.0).margin(1e-9));
            CHECK(a.raan_deg == b.raan_deg);
        }
    }
    // Planes 30 deg apart in RAAN (180 deg across 6 planes).
    CHECK(sats[13].elements.raan_deg - sats[0].elements.raan_deg == Approx(30.0).margin(1e-12));
    CHECK(sats[77].elements.raan_deg == Approx(150.0).margin(1e-12));

    // Identity bookkeeping.
    for (size_t i = 0; i < sats.size(); ++i) {
        CHECK(sats[i].id.ordinal == static_cast<int>(i));
        CHECK(sats[i].id.plane == static_cast<int>(i) / 13);
        CHECK(sats[i].id.index_in_plane == static_cast<int>(i) % 13);
        CHECK(sats[i].id.layer == Layer::Leo);
    }
}

TEST_CASE("generate_constellation builds the GEO and MEO rings") {
    const auto geo = generate_constellation({Layer::Geo, 1, 3, 35786e3, 0.0, std::nullopt, 360.0},
                                            make_utc(2022, 8, 14, 1, 0, 0.0));
    REQUIRE(geo.size() == 3);
    CHECK(geo[1].elements.mean_anomaly_epoch_deg - geo[0].elements.mean_anomaly_epoch_deg ==
          Approx(120.0).margin(1e-12));
    CHECK(geo[2].elements.mean_anomaly_epoch_deg - geo[1].elements.mean_anomaly_epoch_deg ==
          Approx(120.0).margin(1e-12));

    const auto meo = generate_constellation({Layer::Meo, 1, 20, 8062e3, 0.0, std::nullopt, 360.0},
                                            make_utc(2022, 8, 14, 1, 0, 0.0));
    REQUIRE(meo.size() == 20);
    for (int s = 0; s + 1 < 20; ++s) {
        CHECK(meo[s + 1].elements.mean_anomaly_epoch_deg - meo[s].elements.mean_anomaly_epoch_deg ==
              Approx(18.0).margin(1e-9));
    }
}

TEST_CASE("generate_constellation rejects empty specs") {
    CHECK_THROWS_AS(generate_constellation({Layer::Leo, 0, 13, 1015e3, 98.98, std::nullopt, 180.0},
                                           UtcTime{}),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_constellation({Layer::Leo, 6, 0, 1015e3, 98.98, std::nullopt, 180.0},
                                           UtcTime{}),
                    std::invalid_argument);
}

TEST_CASE("generate_constellation is a pure function of (spec, k)") {
    const ConstellationSpec spec{Layer::Leo, 6, 13, 1015e3, 98.98, std::nullopt, 180.0};
    const UtcTime epoch = make_utc(2022, 8, 14, 1, 0, 0.0);
    const auto a = generate_constellation(spec, epoch);
    const auto b = generate_constellation(spec, epoch);
    REQUIRE(a.size() == b.size());
    for (size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].elements.raan_deg == b[i].elements.raan_deg);
        CHECK(a[i].elements.mean_anomaly_epoch_deg == b[i].elements.mean_anomaly_epoch_deg);
    }
}

TEST_CASE("propagate returns to the inertial start point after one period") {
    KeplerElements el;
    el.semi_major_axis_m = kEarthRadiusM + 1015e3;
    el.eccentricity = 0.0;
    el.inclination_deg = 98.98;
    el.raan_deg = 40.0;
    el.arg_perigee_deg = 0.0;
    el.mean_anomaly_epoch_deg = 77.0;
    el.epoch = make_utc(2022, 8, 14, 1, 0, 0.0);

    const Vec3 start = propagate_eci(el, el.epoch);
    const Vec3 after = propagate_eci(el, el.epoch.plus_seconds(el.period_s()));
    CHECK(distance(start, after) < 1.0);
}

TEST_CASE("propagate keeps a GEO slot's ECEF longitude within 0.1 deg over 24 h") {
    const auto geo = generate_constellation({Layer::Geo, 1, 3, 35786e3, 0.0, std::nullopt, 360.0},
                                            make_utc(2022, 8, 14, 1, 0, 0.0));
    const auto& el = geo[0].elements;
    const double lon0 = ecef_longitude_deg(propagate(el, el.epoch));
    for (int h = 1; h <= 24; ++h) {
        const double lon = ecef_longitude_deg(propagate(el, el.epoch.plus_seconds(3600.0 * h)));
        double diff = std::fmod(lon - lon0 + 540.0, 360.0) - 180.0;
        CHECK(std::abs(diff) < 0.1);
    }
}

TEST_CASE("LEO orbital period matches 2*pi*sqrt(a^3/mu)") {
    KeplerElements el;
    el.semi_major_axis_m = kEarthRadiusM + 1015e3;
    el.eccentricity = 0.0;
    const double a = el.semi_major_axis_m;
    const double oracle = 2.0 * kPi * std::sqrt(a * a * a / 3.986004418e14);
    CHECK(el.period_s() == Approx(oracle).epsilon(1e-12));
    CHECK(el.period_s() / 60.0 == Approx(105.1).epsilon(0.01));  // ~105 min at 1015 km
}

TEST_CASE("propagation preserves orbital radius for circular orbits") {
    std::mt19937 gen(11);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int i = 0; i < 20; ++i) {
        KeplerElements el;
        el.semi_major_axis_m = 6800e3 + 36000e3 * u01(gen);
        el.eccentricity = 0.0;
        el.inclination_deg = 180.0 * u01(gen);
        el.raan_deg = 360.0 * u01(gen);
        el.arg_perigee_deg = 360.0 * u01(gen);
        el.mean_anomaly_epoch_deg = 360.0 * u01(gen);
        el.epoch = make_utc(2022, 8, 14, 1, 0, 0.0);
        for (int k = 0; k < 10; ++k) {
            const auto pos = propagate(el, el.epoch.plus_seconds(86400.0 * u01(gen)));
            CHECK(pos.vec().norm() == Approx(el.semi_major_axis_m).margin(1.0));
        }
    }
}

TEST_CASE("gmst matches the published polynomial anchors") {
    // J2000.0 epoch.
    const UtcTime j2000 = make_utc(2000, 1, 1, 12, 0, 0.0);
    CHECK(gmst_deg(j2000) == Approx(280.4606).margin(1e-3));

    // Periodic over one sidereal day.
    const UtcTime t = make_utc(2022, 8, 14, 1, 0, 0.0);
    const double g0 = gmst_deg(t);
    const double g1 = gmst_deg(t.plus_seconds(86164.0905));
    const double wrapped = std::fmod(g1 - g0 + 540.0, 360.0) - 180.0;
    CHECK(std::abs(wrapped) < 1e-3);

    // Half a day advances by half the daily rate: 360.98564736629 / 2.
    const double half_rate = 360.98564736629 / 2.0;  // = 180.49282368...
    const double g12 = gmst_deg(t.plus_seconds(43200.0));
    const double diff = std::fmod(g12 - g0 + 360.0, 360.0);
    CHECK(diff == Approx(half_rate).margin(1e-3));
}

TEST_CASE("geodetic_to_ecef spherical anchors") {
    const auto origin = geodetic_to_ecef({0.0, 0.0, 0.0});
    CHECK(origin.x == Approx(6371008.8).margin(1e-6));
    CHECK(origin.y == Approx(0.0).margin(1e-6));
    CHECK(origin.z == Approx(0.0).margin(1e-6));

    const auto pole = geodetic_to_ecef({90.0, 123.0, 0.0});
    CHECK(pole.z == Approx(6371008.8).margin(1e-6));
    CHECK(std::hypot(pole.x, pole.y) < 1e-6);

    const auto calgary = geodetic_to_ecef({51.0447, -114.0719, 0.0});
    CHECK(calgary.vec().norm() == Approx(6371008.8).margin(1e-6));
    CHECK(calgary.z == Approx(6371008.8 * std::sin(51.0447 * kDegToRad)).margin(1e-6));
}

TEST_CASE("geodetic_to_ecef validates the site") {
    CHECK_THROWS_AS(geodetic_to_ecef({91.0, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(geodetic_to_ecef({0.0, 200.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(geodetic_to_ecef({0.0, 0.0, -5.0}), std::invalid_argument);
}

TEST_CASE("propagation staleness window is +/- 7 days") {
    KeplerElements el;
    el.semi_major_axis_m = kEarthRadiusM + 1015e3;
    el.epoch = make_utc(2022, 8, 14, 1, 0, 0.0);
    CHECK_FALSE(propagation_is_stale(el, el.epoch.plus_seconds(6.9 * 86400.0)));
    CHECK(propagation_is_stale(el, el.epoch.plus_seconds(7.1 * 86400.0)));
    CHECK(propagation_is_stale(el, el.epoch.plus_seconds(-7.1 * 86400.0)));
}
