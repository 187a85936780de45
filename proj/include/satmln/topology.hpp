#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "satmln/access.hpp"
#include "satmln/orbital.hpp"

namespace satmln {

/// Admissible link classes. Direction is packet flow (TC: ground to space,
/// then downward between layers); LEO/MEO never transmit up to GEO.
enum class LinkType { GsLeo, GsMeo, GsGeo, LeoLeo, MeoMeo, MeoLeo, GeoGeo, GeoLeo };

inline const char* link_type_name(LinkType lt) {
    switch (lt) {
        case LinkType::GsLeo: return "GS_LEO";
        case LinkType::GsMeo: return "GS_MEO";
        case LinkType::GsGeo: return "GS_GEO";
        case LinkType::LeoLeo: return "LEO_LEO";
        case LinkType::MeoMeo: return "MEO_MEO";
        case LinkType::MeoLeo: return "MEO_LEO";
        case LinkType::GeoGeo: return "GEO_GEO";
        case LinkType::GeoLeo: return "GEO_LEO";
    }
    return "?";
}

/// A route endpoint: the ground station or a satellite of some layer.
struct NodeRef {
    enum class Kind { Ground, Sat };
    Kind kind = Kind::Ground;
    Layer layer = Layer::Leo;  // meaningful for Kind::Sat only
    int ordinal = -1;          // meaningful for Kind::Sat only

    static NodeRef ground() { return {}; }
    static NodeRef sat(const SatelliteId& id) { return {Kind::Sat, id.layer, id.ordinal}; }

    friend bool operator==(const NodeRef& a, const NodeRef& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Ground) return true;
        return a.layer == b.layer && a.ordinal == b.ordinal;
    }
    friend bool operator!=(const NodeRef& a, const NodeRef& b) { return !(a == b); }
};

/// Link class for an ordered hop; throws on inadmissible combinations
/// (up-links into GEO, satellite-to-ground, cross-layer LEO/MEO mixes).
inline LinkType classify_link(const NodeRef& from, const NodeRef& to) {
    if (from.kind == NodeRef::Kind::Ground && to.kind == NodeRef::Kind::Sat) {
        switch (to.layer) {
            case Layer::Leo: return LinkType::GsLeo;
            case Layer::Meo: return LinkType::GsMeo;
            case Layer::Geo: return LinkType::GsGeo;
        }
    }
    if (from.kind == NodeRef::Kind::Sat && to.kind == NodeRef::Kind::Sat) {
        if (from.layer == Layer::Leo && to.layer == Layer::Leo) return LinkType::LeoLeo;
        if (from.layer == Layer::Meo && to.layer == Layer::Meo) return LinkType::MeoMeo;
        if (from.layer == Layer::Meo && to.layer == Layer::Leo) return LinkType::MeoLeo;
        if (from.layer == Layer::Geo && to.layer == Layer::Geo) return LinkType::GeoGeo;
        if (from.layer == Layer::Geo && to.layer == Layer::Leo) return LinkType::GeoLeo;
    }
    throw std::logic_error("inadmissible link");
}

struct RouteHop {
    NodeRef from;
    NodeRef to;
    double length_m = 0.0;
    LinkType link = LinkType::GsLeo;
};

enum class LayerUsed { Leo, Meo, Geo, Direct, None };

inline const char* layer_used_name(LayerUsed l) {
    switch (l) {
        case LayerUsed::Leo: return "LEO";
        case LayerUsed::Meo: return "MEO";
        case LayerUsed::Geo: return "GEO";
        case LayerUsed::Direct: return "DIRECT";
        case LayerUsed::None: return "NONE";
    }
    return "?";
}

/// Ordered hop chain from the ground station to the target satellite.
struct Route {
    std::vector<RouteHop> hops;
    LayerUsed layer_used = LayerUsed::Leo;
    double total_length_m = 0.0;

    int hop_count() const { return static_cast<int>(hops.size()); }

    void push_hop(const NodeRef& from, const NodeRef& to, double length_m) {
        hops.push_back({from, to, length_m, classify_link(from, to)});
        total_length_m += length_m;
    }
};

namespace detail {

/// Lookup from (plane, index) to list position; validates a full grid.
struct GridIndex {
    int planes = 0;
    int per_plane = 0;
    std::vector<int> slot;  // plane * per_plane + index -> position in the input span

    explicit GridIndex(std::span<const Satellite> sats) {
        for (const auto& s : sats) {
            planes = std::max(planes, s.id.plane + 1);
            per_plane = std::max(per_plane, s.id.index_in_plane + 1);
        }
        slot.assign(static_cast<size_t>(planes) * per_plane, -1);
        for (size_t i = 0; i < sats.size(); ++i) {
            slot[static_cast<size_t>(sats[i].id.plane) * per_plane + sats[i].id.index_in_plane] =
                static_cast<int>(i);
        }
        for (int pos : slot) {
            if (pos < 0) throw std::invalid_argument("constellation grid has holes");
        }
    }

    int at(int plane, int index) const { return slot[static_cast<size_t>(plane) * per_plane + index]; }
};

/// Signed step (+1/-1) along the shorter ring direction, and the ring
/// distance; exact ties walk in the +1 direction.
inline std::pair<int, int> ring_walk(int from, int to, int size) {
    const int forward = ((to - from) % size + size) % size;
    const int backward = size - forward;
    if (forward == 0) return {0, 0};
    return forward <= backward ? std::make_pair(forward, 1) : std::make_pair(backward, -1);
}

}  // namespace detail

/// The up-to-four +grid neighbors of a LEO satellite: in-plane +/-1 (a ring)
/// and the same slot in the adjacent planes. Cross-plane links do not wrap
/// across the seam between the last and first plane.
inline std::vector<Satellite> leo_neighbors(const Satellite& sat, std::span<const Satellite> leo) {
    const detail::GridIndex grid(leo);
    std::vector<Satellite> out;
    const int p = sat.id.plane;
    const int s = sat.id.index_in_plane;
    if (grid.per_plane > 1) {
        out.push_back(leo[grid.at(p, (s + 1) % grid.per_plane)]);
        if (grid.per_plane > 2)
            out.push_back(leo[grid.at(p, (s - 1 + grid.per_plane) % grid.per_plane)]);
    }
    if (p + 1 < grid.planes) out.push_back(leo[grid.at(p + 1, s)]);
    if (p - 1 >= 0) out.push_back(leo[grid.at(p - 1, s)]);
    return out;
}

/// Grid route between two LEO satellites: cross planes first at constant
/// in-plane index, then walk the destination plane along the shorter ring
/// direction. src == target yields an empty segment.
inline Route route_within_leo(const Satellite& src, const Satellite& target, std::span<const Satellite> leo,
                              std::span<const EcefPosition> positions) {
    const detail::GridIndex grid(leo);
    Route route;
    route.layer_used = LayerUsed::Leo;

    int plane = src.id.plane;
    int index = src.id.index_in_plane;
    int cur = grid.at(plane, index);
    const int plane_step = target.id.plane > plane ? 1 : -1;
    while (plane != target.id.plane) {
        plane += plane_step;
        const int next = grid.at(plane, index);
        route.push_hop(NodeRef::sat(leo[cur].id), NodeRef::sat(leo[next].id),
                       distance(positions[cur].vec(), positions[next].vec()));
        cur = next;
    }
    auto [ring_dist, dir] = detail::ring_walk(index, target.id.index_in_plane, grid.per_plane);
    for (int k = 0; k < ring_dist; ++k) {
        index = ((index + dir) % grid.per_plane + grid.per_plane) % grid.per_plane;
        const int next = grid.at(plane, index);
        route.push_hop(NodeRef::sat(leo[cur].id), NodeRef::sat(leo[next].id),
                       distance(positions[cur].vec(), positions[next].vec()));
        cur = next;
    }
    return route;
}

inline Route route_within_leo(const Satellite& src, const Satellite& target, std::span<const Satellite> leo,
                              UtcTime t) {
    return route_within_leo(src, target, leo, detail::propagate_all(leo, t));
}

namespace detail {

/// Shared MEO/GEO relay construction: walk the single-plane ring from the
/// source to the satellite nearest the target (line-of-sight filtered),
/// then one relay->LEO hop.
inline std::optional<Route> route_via_ring(const Satellite& src, const EcefPosition& target_pos,
                                           const NodeRef& target_ref, std::span<const Satellite> ring,
                                           std::span<const EcefPosition> positions, LayerUsed layer) {
    const auto dest = nearest_sat_to_target(target_pos, ring, positions);
    if (!dest) return std::nullopt;

    // Ring order follows in-plane index; map index -> list position.
    const int size = static_cast<int>(ring.size());
    std::vector<int> by_index(static_cast<size_t>(size), -1);
    for (size_t i = 0; i < ring.size(); ++i) {
        const int idx = ring[i].id.index_in_plane;
        if (idx < 0 || idx >= size || by_index[static_cast<size_t>(idx)] != -1)
            throw std::invalid_argument("relay constellation is not a single ring");
        by_index[static_cast<size_t>(idx)] = static_cast<int>(i);
    }

    Route route;
    route.layer_used = layer;
    int index = src.id.index_in_plane;
    int cur = by_index[static_cast<size_t>(index)];
    auto [ring_dist, dir] = ring_walk(index, dest->id.index_in_plane, size);
    for (int k = 0; k < ring_dist; ++k) {
        index = ((index + dir) % size + size) % size;
        const int next = by_index[static_cast<size_t>(index)];
        route.push_hop(NodeRef::sat(ring[cur].id), NodeRef::sat(ring[next].id),
                       distance(positions[cur].vec(), positions[next].vec()));
        cur = next;
    }
    route.push_hop(NodeRef::sat(ring[cur].id), target_ref,
                   distance(positions[cur].vec(), target_pos.vec()));
    return route;
}

}  // namespace detail

/// MEO relay segment: ring hops from the source MEO to the MEO nearest the
/// target, then the MEO->LEO hop. nullopt when no MEO can see the target.
inline std::optional<Route> route_via_meo(const Satellite& src_meo, const Satellite& target,
                                          std::span<const Satellite> meo,
                                          std::span<const EcefPosition> meo_positions,
                                          const EcefPosition& target_pos) {
    return detail::route_via_ring(src_meo, target_pos, NodeRef::sat(target.id), meo, meo_positions,
                                  LayerUsed::Meo);
}

inline std::optional<Route> route_via_meo(const Satellite& src_meo, const Satellite& target,
                                          std::span<const Satellite> meo, UtcTime t) {
    return route_via_meo(src_meo, target, meo, detail::propagate_all(meo, t), propagate(target.elements, t));
}

/// GEO relay segment, same construction on the GEO ring.
inline std::optional<Route> route_via_geo(const Satellite& src_geo, const Satellite& target,
                                          std::span<const Satellite> geo,
                                          std::span<const EcefPosition> geo_positions,
                                          const EcefPosition& target_pos) {
    return detail::route_via_ring(src_geo, target_pos, NodeRef::sat(target.id), geo, geo_positions,
                                  LayerUsed::Geo);
}

inline std::optional<Route> route_via_geo(const Satellite& src_geo, const Satellite& target,
                                          std::span<const Satellite> geo, UtcTime t) {
    return route_via_geo(src_geo, target, geo, detail::propagate_all(geo, t), propagate(target.elements, t));
}

/// Single GS->target hop when the target is directly visible, else nullopt.
inline std::optional<Route> direct_route(const GroundStation& gs, const Satellite& target,
                                         const EcefPosition& target_pos) {
    if (!is_visible_gs(gs, target_pos, target.id.layer)) return std::nullopt;
    Route route;
    route.layer_used = LayerUsed::Direct;
    const Vec3 gs_pos = geodetic_to_ecef(gs.site, target_pos.t).vec();
    route.push_hop(NodeRef::ground(), NodeRef::sat(target.id), distance(gs_pos, target_pos.vec()));
    return route;
}

inline std::optional<Route> direct_route(const GroundStation& gs, const Satellite& target, UtcTime t) {
    return direct_route(gs, target, propagate(target.elements, t));
}

/// Prefix a satellite segment with the ground-station uplink hop.
inline Route with_gs_uplink(const GroundStation& gs, const Satellite& src, const EcefPosition& src_pos,
                            Route segment) {
    Route route;
    route.layer_used = segment.layer_used;
    const Vec3 gs_pos = geodetic_to_ecef(gs.site, src_pos.t).vec();
    route.push_hop(NodeRef::ground(), NodeRef::sat(src.id), distance(gs_pos, src_pos.vec()));
    for (const auto& hop : segment.hops) route.push_hop(hop.from, hop.to, hop.length_m);
    return route;
}

}  // namespace satmln
