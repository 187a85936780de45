#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "satmln/metrics.hpp"
#include "satmln/topology.hpp"

namespace satmln {

enum class SchemeKind { Mln, Traditional, GeoOnly, LeoMln };

inline const char* scheme_name(SchemeKind s) {
    switch (s) {
        case SchemeKind::Mln: return "mln";
        case SchemeKind::Traditional: return "traditional";
        case SchemeKind::GeoOnly: return "geo_only";
        case SchemeKind::LeoMln: return "leo_mln";
    }
    return "?";
}

inline SchemeKind parse_scheme(const std::string& name) {
    if (name == "mln") return SchemeKind::Mln;
    if (name == "traditional") return SchemeKind::Traditional;
    if (name == "geo_only") return SchemeKind::GeoOnly;
    if (name == "leo_mln") return SchemeKind::LeoMln;
    throw std::invalid_argument("unknown scheme '" + name + "' (expected mln, traditional, geo_only, leo_mln)");
}

enum class FailureReason { NoSourceSat, NoTargetLos, LinkFailure };

inline const char* failure_reason_name(FailureReason r) {
    switch (r) {
        case FailureReason::NoSourceSat: return "NO_SOURCE_SAT";
        case FailureReason::NoTargetLos: return "NO_TARGET_LOS";
        case FailureReason::LinkFailure: return "LINK_FAILURE";
    }
    return "?";
}

/// Result of one TC delivery attempt. success implies a route is present;
/// failures carry the reason and no route.
struct MissionOutcome {
    bool success = false;
    std::optional<Route> route;
    LayerUsed layer_used = LayerUsed::None;
    std::optional<FailureReason> failure_reason;

    static MissionOutcome ok(Route r) {
        MissionOutcome o;
        o.success = true;
        o.layer_used = r.layer_used;
        o.route = std::move(r);
        return o;
    }

    static MissionOutcome fail(FailureReason reason) {
        MissionOutcome o;
        o.failure_reason = reason;
        return o;
    }
};

/// The three satnet layers of a scenario, ordinal-ordered per layer.
struct ConstellationSet {
    std::vector<Satellite> leo;
    std::vector<Satellite> meo;
    std::vector<Satellite> geo;
};

/// All satellite positions at one sample time, aligned index-for-index
/// with the ConstellationSet lists. Computed once per sample and shared
/// across schemes and targets.
struct Snapshot {
    UtcTime t;
    std::vector<EcefPosition> leo;
    std::vector<EcefPosition> meo;
    std::vector<EcefPosition> geo;
};

inline Snapshot make_snapshot(const ConstellationSet& sats, UtcTime t) {
    return {t, detail::propagate_all(sats.leo, t), detail::propagate_all(sats.meo, t),
            detail::propagate_all(sats.geo, t)};
}

/// SplitMix64: tiny, portable generator so runs are bit-reproducible
/// across platforms. Streams are split per (scheme, target, sample).
struct Rng {
    uint64_t state = 0;

    uint64_t next() {
        state += 0x9e3779b97f4a7c15ULL;
        uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    static Rng split(uint64_t seed, uint64_t a, uint64_t b, uint64_t c) {
        Rng mixer{seed};
        mixer.state ^= mixer.next() + a;
        mixer.state ^= mixer.next() + (b << 20);
        mixer.state ^= mixer.next() + (c << 40);
        mixer.next();
        return mixer;
    }
};

/// Draw one Bernoulli trial per hop (failure probability 1 - phi); any
/// failed hop turns a successful outcome into a LINK_FAILURE.
inline MissionOutcome apply_stochastic_failures(const MissionOutcome& outcome, const ReliabilityTable& phis,
                                                Rng& rng) {
    if (!outcome.success) return outcome;
    bool failed = false;
    for (const auto& hop : outcome.route->hops) {
        if (rng.uniform01() < 1.0 - phis.phi(hop.link)) failed = true;
    }
    return failed ? MissionOutcome::fail(FailureReason::LinkFailure) : outcome;
}

namespace detail {

/// Optional stochastic link-failure stage shared by the schemes.
struct FailureStage {
    const ReliabilityTable* phis = nullptr;
    Rng* rng = nullptr;

    MissionOutcome apply(MissionOutcome outcome) const {
        if (phis == nullptr || rng == nullptr) return outcome;
        return apply_stochastic_failures(outcome, *phis, *rng);
    }
};

inline const EcefPosition& target_position(const Satellite& target, const ConstellationSet& sats,
                                           const Snapshot& snap) {
    const size_t idx = static_cast<size_t>(target.id.ordinal);
    if (target.id.layer != Layer::Leo || idx >= sats.leo.size() ||
        sats.leo[idx].id.ordinal != target.id.ordinal)
        throw std::invalid_argument("target must be a LEO satellite of the scenario");
    return snap.leo[idx];
}

/// One layer attempt of the layered scheme: find the source satellite over
/// the GS, build the layer route, optionally run the stochastic stage.
inline MissionOutcome attempt_layer(Layer layer, const GroundStation& gs, const Satellite& target,
                                    const ConstellationSet& sats, const Snapshot& snap,
                                    const FailureStage& failures) {
    std::span<const Satellite> ring;
    std::span<const EcefPosition> positions;
    switch (layer) {
        case Layer::Leo: ring = sats.leo; positions = snap.leo; break;
        case Layer::Meo: ring = sats.meo; positions = snap.meo; break;
        case Layer::Geo: ring = sats.geo; positions = snap.geo; break;
    }
    if (ring.empty()) return MissionOutcome::fail(FailureReason::NoSourceSat);

    const auto src = nearest_sat_to_gs(gs, ring, positions);
    if (!src) return MissionOutcome::fail(FailureReason::NoSourceSat);
    const EcefPosition& src_pos = positions[static_cast<size_t>(src->id.ordinal)];
    const EcefPosition& target_pos = target_position(target, sats, snap);

    if (layer == Layer::Leo) {
        if (src->id.ordinal == target.id.ordinal) {
            // The source LEO satellite is the target: mission completed.
            Route route;
            route.layer_used = LayerUsed::Leo;
            const Vec3 gs_pos = geodetic_to_ecef(gs.site, snap.t).vec();
            route.push_hop(NodeRef::ground(), NodeRef::sat(target.id), distance(gs_pos, target_pos.vec()));
            return MissionOutcome::ok(std::move(route));
        }
        Route segment = route_within_leo(*src, target, sats.leo, snap.leo);
        return failures.apply(MissionOutcome::ok(with_gs_uplink(gs, *src, src_pos, std::move(segment))));
    }

    std::optional<Route> segment =
        layer == Layer::Meo ? route_via_meo(*src, target, sats.meo, snap.meo, target_pos)
                            : route_via_geo(*src, target, sats.geo, snap.geo, target_pos);
    if (!segment) return MissionOutcome::fail(FailureReason::NoTargetLos);
    return failures.apply(MissionOutcome::ok(with_gs_uplink(gs, *src, src_pos, std::move(*segment))));
}

}  // namespace detail

/// The layered delivery scheme: try the LEO satnet, then MEO, then GEO.
/// A layer is skipped when no source satellite covers the GS; a failed
/// transmission (no line of sight to the target, or a stochastic link
/// failure) also moves on to the next satnet.
inline MissionOutcome mln_prepare(const GroundStation& gs, const Satellite& target,
                                  const ConstellationSet& sats, const Snapshot& snap,
                                  const ReliabilityTable* stochastic_phis = nullptr, Rng* rng = nullptr) {
    const detail::FailureStage failures{stochastic_phis, rng};
    MissionOutcome last = MissionOutcome::fail(FailureReason::NoSourceSat);
    for (Layer layer : {Layer::Leo, Layer::Meo, Layer::Geo}) {
        last = detail::attempt_layer(layer, gs, target, sats, snap, failures);
        if (last.success) return last;
    }
    return last;
}

/// Traditional operations: deliver only when the target itself has access
/// to the GS.
inline MissionOutcome traditional(const GroundStation& gs, const Satellite& target,
                                  const ConstellationSet& sats, const Snapshot& snap,
                                  const ReliabilityTable* stochastic_phis = nullptr, Rng* rng = nullptr) {
    const detail::FailureStage failures{stochastic_phis, rng};
    auto route = direct_route(gs, target, detail::target_position(target, sats, snap));
    if (!route) return MissionOutcome::fail(FailureReason::NoSourceSat);
    return failures.apply(MissionOutcome::ok(std::move(*route)));
}

/// GEO-relay-only operations: every packet goes up to the GEO satnet.
inline MissionOutcome geo_only(const GroundStation& gs, const Satellite& target,
                               const ConstellationSet& sats, const Snapshot& snap,
                               const ReliabilityTable* stochastic_phis = nullptr, Rng* rng = nullptr) {
    return detail::attempt_layer(Layer::Geo, gs, target, sats, snap,
                                 detail::FailureStage{stochastic_phis, rng});
}

/// The layered scheme restricted to the LEO satnet (no MEO/GEO fallback).
inline MissionOutcome leo_mln(const GroundStation& gs, const Satellite& target,
                              const ConstellationSet& sats, const Snapshot& snap,
                              const ReliabilityTable* stochastic_phis = nullptr, Rng* rng = nullptr) {
    return detail::attempt_layer(Layer::Leo, gs, target, sats, snap,
                                 detail::FailureStage{stochastic_phis, rng});
}

inline MissionOutcome run_scheme(SchemeKind scheme, const GroundStation& gs, const Satellite& target,
                                 const ConstellationSet& sats, const Snapshot& snap,
                                 const ReliabilityTable* stochastic_phis = nullptr, Rng* rng = nullptr) {
    switch (scheme) {
        case SchemeKind::Mln: return mln_prepare(gs, target, sats, snap, stochastic_phis, rng);
        case SchemeKind::Traditional: return traditional(gs, target, sats, snap, stochastic_phis, rng);
        case SchemeKind::GeoOnly: return geo_only(gs, target, sats, snap, stochastic_phis, rng);
        case SchemeKind::LeoMln: return leo_mln(gs, target, sats, snap, stochastic_phis, rng);
    }
    throw std::logic_error("unknown scheme");
}

}  // namespace satmln
