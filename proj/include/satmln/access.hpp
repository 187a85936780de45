#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "satmln/orbital.hpp"

namespace satmln {

/// Earth-limb margin for satellite-to-satellite line-of-sight tests:
/// paths grazing below this altitude are treated as blocked.
constexpr double kIslGrazingMarginM = 100e3;

/// Ground site with the two per-layer minimum-elevation thresholds
/// (minElev1 for LEO links, minElev2 for MEO/GEO links).
struct GroundStation {
    GeodeticCoord site;
    double min_elevation_ngso_deg = 25.0;     // minElev1, GS <-> LEO
    double min_elevation_geo_meo_deg = 10.0;  // minElev2, GS <-> MEO/GEO
    std::string name;

    void validate() const {
        site.validate();
        if (min_elevation_ngso_deg < 0.0 || min_elevation_ngso_deg >= 90.0 ||
            min_elevation_geo_meo_deg < 0.0 || min_elevation_geo_meo_deg >= 90.0)
            throw std::invalid_argument("minimum elevations must lie in [0, 90)");
    }

    double min_elevation_for(Layer layer) const {
        return layer == Layer::Leo ? min_elevation_ngso_deg : min_elevation_geo_meo_deg;
    }
};

/// One visibility evaluation of a (ground station, satellite) pair.
struct AccessSample {
    UtcTime time;
    bool visible = false;
    double elevation_deg = 0.0;
    double slant_range_m = 0.0;
};

/// Euclidean distance between two positions of the same instant.
inline double slant_range(const EcefPosition& a, const EcefPosition& b) {
    if (a.t != b.t)
        throw std::invalid_argument("slant_range: positions are for different instants (" +
                                    format_utc(a.t) + " vs " + format_utc(b.t) + ")");
    return distance(a.vec(), b.vec());
}

/// Elevation of sat above the local horizon at the ground station:
/// 90 deg minus the angle between the local zenith and the GS->sat vector.
inline double elevation_deg(const GroundStation& gs, const EcefPosition& sat) {
    const Vec3 gs_pos = geodetic_to_ecef(gs.site, sat.t).vec();
    const Vec3 zenith = normalized(gs_pos);
    const Vec3 to_sat = sat.vec() - gs_pos;
    const double c = std::clamp(dot(zenith, to_sat) / to_sat.norm(), -1.0, 1.0);
    return 90.0 - std::acos(c) * kRadToDeg;
}

/// Visibility against the layer's minimum elevation (inclusive threshold).
inline bool is_visible_gs(const GroundStation& gs, const EcefPosition& sat, Layer layer) {
    return elevation_deg(gs, sat) >= gs.min_elevation_for(layer);
}

inline bool is_visible_gs(const GroundStation& gs, const Satellite& sat, UtcTime t) {
    return is_visible_gs(gs, propagate(sat.elements, t), sat.id.layer);
}

/// Smallest distance from the Earth's center to the segment ab.
inline double segment_min_distance_to_center(const Vec3& a, const Vec3& b) {
    const Vec3 d = b - a;
    const double len_sq = d.norm_sq();
    if (len_sq == 0.0) return a.norm();
    const double t = std::clamp(-dot(a, d) / len_sq, 0.0, 1.0);
    return (a + t * d).norm();
}

/// True when the straight path between two space positions clears the
/// Earth limb by at least grazing_margin. A millimeter of slack keeps the
/// boundary case (an endpoint exactly on the limit sphere) stable against
/// rounding.
inline bool has_line_of_sight(const EcefPosition& a, const EcefPosition& b,
                              double grazing_margin_m = kIslGrazingMarginM) {
    return segment_min_distance_to_center(a.vec(), b.vec()) >= kEarthRadiusM + grazing_margin_m - 1e-3;
}

namespace detail {

/// Shared nearest-by-slant-range scan. Ties break to the lower ordinal so
/// results are independent of the satnet list order.
template <typename Accept>
std::optional<Satellite> nearest_satellite(const Vec3& from, std::span<const Satellite> satnet,
                                           std::span<const EcefPosition> positions, Accept&& accept) {
    std::optional<Satellite> best;
    double best_range = 0.0;
    for (size_t i = 0; i < satnet.size(); ++i) {
        if (!accept(satnet[i], positions[i])) continue;
        const double range = distance(from, positions[i].vec());
        if (!best || range < best_range ||
            (range == best_range && satnet[i].id.ordinal < best->id.ordinal)) {
            best = satnet[i];
            best_range = range;
        }
    }
    return best;
}

inline std::vector<EcefPosition> propagate_all(std::span<const Satellite> sats, UtcTime t) {
    std::vector<EcefPosition> out;
    out.reserve(sats.size());
    for (const auto& s : sats) out.push_back(propagate(s.elements, t));
    return out;
}

}  // namespace detail

/// Nearest satellite of the satnet currently visible from the ground
/// station; nullopt when none is above the applicable minimum elevation.
inline std::optional<Satellite> nearest_sat_to_gs(const GroundStation& gs, std::span<const Satellite> satnet,
                                                  std::span<const EcefPosition> positions) {
    if (satnet.empty()) return std::nullopt;
    const Vec3 gs_pos = geodetic_to_ecef(gs.site, positions.front().t).vec();
    return detail::nearest_satellite(gs_pos, satnet, positions,
                                     [&](const Satellite& s, const EcefPosition& p) {
                                         return is_visible_gs(gs, p, s.id.layer);
                                     });
}

inline std::optional<Satellite> nearest_sat_to_gs(const GroundStation& gs, std::span<const Satellite> satnet,
                                                  UtcTime t) {
    const auto positions = detail::propagate_all(satnet, t);
    return nearest_sat_to_gs(gs, satnet, positions);
}

/// Nearest satellite of a (MEO or GEO) satnet with line of sight to the
/// target position; nullopt when the Earth blocks every candidate.
inline std::optional<Satellite> nearest_sat_to_target(const EcefPosition& target,
                                                      std::span<const Satellite> satnet,
                                                      std::span<const EcefPosition> positions) {
    return detail::nearest_satellite(target.vec(), satnet, positions,
                                     [&](const Satellite&, const EcefPosition& p) {
                                         return has_line_of_sight(p, target);
                                     });
}

inline std::optional<Satellite> nearest_sat_to_target(const Satellite& target,
                                                      std::span<const Satellite> satnet, UtcTime t) {
    const auto positions = detail::propagate_all(satnet, t);
    return nearest_sat_to_target(propagate(target.elements, t), satnet, positions);
}

/// One-shot visibility evaluation of a (ground station, satellite) pair.
inline AccessSample evaluate_access(const GroundStation& gs, const Satellite& sat, UtcTime t) {
    const EcefPosition pos = propagate(sat.elements, t);
    AccessSample sample;
    sample.time = t;
    sample.elevation_deg = elevation_deg(gs, pos);
    sample.slant_range_m = slant_range(geodetic_to_ecef(gs.site, t), pos);
    sample.visible = sample.elevation_deg >= gs.min_elevation_for(sat.id.layer);
    return sample;
}

/// Fraction of instants in [t_start, t_end), stepped by step_s, at which
/// the satellite is visible from the ground station.
inline double access_fraction(const GroundStation& gs, const Satellite& sat, UtcTime t_start, UtcTime t_end,
                              double step_s) {
    if (step_s <= 0.0) throw std::invalid_argument("access_fraction: step must be positive");
    if (!(t_start < t_end)) throw std::invalid_argument("access_fraction: empty window");
    long long samples = 0;
    long long visible = 0;
    for (UtcTime t = t_start; t < t_end; t = t.plus_seconds(step_s)) {
        ++samples;
        if (evaluate_access(gs, sat, t).visible) ++visible;
    }
    return static_cast<double>(visible) / static_cast<double>(samples);
}

}  // namespace satmln
