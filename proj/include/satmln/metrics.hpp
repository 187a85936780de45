#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "satmln/topology.hpp"

namespace satmln {

/// RF/FSO payload combinations evaluated side by side.
enum class RfScenario { S1, S2, S3, S4 };

inline const char* rf_scenario_name(RfScenario s) {
    switch (s) {
        case RfScenario::S1: return "S1";
        case RfScenario::S2: return "S2";
        case RfScenario::S3: return "S3";
        case RfScenario::S4: return "S4";
    }
    return "?";
}

enum class Band { Ka, L, Fso };

/// Data rate of every link class under each scenario. The scenario fixes
/// the band per link class; one rate constant applies per band.
struct LinkRateTable {
    double ka_bps = 324e6;    // r_k
    double l_bps = 150e3;     // r_l
    double fso_bps = 1.8e9;   // r_o (published GEO-LEO FSO rate, applied to all FSO cells)

    void validate() const {
        if (ka_bps <= 0.0 || l_bps <= 0.0 || fso_bps <= 0.0)
            throw std::invalid_argument("link rates must be positive");
    }

    /// Band assignment: columns are GS-sat, LEO/MEO-LEO, GEO-GEO/LEO, MEO-MEO.
    ///   S1: Ka  Ka  Ka  Ka
    ///   S2: Ka  Ka  L   Ka
    ///   S3: FSO Ka  Ka  Ka
    ///   S4: FSO FSO FSO FSO
    static Band band_for(LinkType link, RfScenario scenario) {
        const bool gs_link = link == LinkType::GsLeo || link == LinkType::GsMeo || link == LinkType::GsGeo;
        const bool geo_link = link == LinkType::GeoGeo || link == LinkType::GeoLeo;
        switch (scenario) {
            case RfScenario::S1: return Band::Ka;
            case RfScenario::S2: return geo_link ? Band::L : Band::Ka;
            case RfScenario::S3: return gs_link ? Band::Fso : Band::Ka;
            case RfScenario::S4: return Band::Fso;
        }
        throw std::logic_error("unknown scenario");
    }

    double rate_bps(LinkType link, RfScenario scenario) const {
        switch (band_for(link, scenario)) {
            case Band::Ka: return ka_bps;
            case Band::L: return l_bps;
            case Band::Fso: return fso_bps;
        }
        throw std::logic_error("unknown band");
    }
};

/// Per-hop latency constants: packet size M, light speed c, processing
/// delay k and queuing delay m.
struct DelayConstants {
    double packet_bits = 8192.0;        // M: 1024 B TC transfer frame
    double light_speed_mps = 299792458.0;
    double processing_s = 100e-6;       // k
    double queuing_s = 100e-6;          // m

    void validate() const {
        if (packet_bits <= 0.0 || light_speed_mps <= 0.0 || processing_s < 0.0 || queuing_s < 0.0)
            throw std::invalid_argument("delay constants must be positive (delays non-negative)");
    }
};

/// Per-link-class reliability phi. Space links carry the published
/// constants; ground hops borrow the nearest class (GS-LEO/GS-MEO the
/// MEO-LEO value, GS-GEO the GEO-LEO value).
struct ReliabilityTable {
    double phi_leo_isl = 0.9980;   // phi_1
    double phi_meo_isl = 0.9990;   // phi_2 (GEO/MEO ISL)
    double phi_geo_isl = 0.9990;   // phi_2 (GEO/MEO ISL)
    double phi_geo_leo = 0.9990;   // phi_3
    double phi_meo_leo = 0.9985;   // phi_4
    double phi_gs_ngso = 0.9985;   // GS-LEO and GS-MEO uplink
    double phi_gs_geo = 0.9990;    // GS-GEO uplink

    double phi(LinkType link) const {
        switch (link) {
            case LinkType::GsLeo:
            case LinkType::GsMeo: return phi_gs_ngso;
            case LinkType::GsGeo: return phi_gs_geo;
            case LinkType::LeoLeo: return phi_leo_isl;
            case LinkType::MeoMeo: return phi_meo_isl;
            case LinkType::GeoGeo: return phi_geo_isl;
            case LinkType::GeoLeo: return phi_geo_leo;
            case LinkType::MeoLeo: return phi_meo_leo;
        }
        throw std::logic_error("unknown link type");
    }

    void validate() const {
        for (double p : {phi_leo_isl, phi_meo_isl, phi_geo_isl, phi_geo_leo, phi_meo_leo, phi_gs_ngso,
                         phi_gs_geo}) {
            if (p <= 0.0 || p > 1.0) throw std::invalid_argument("phi values must lie in (0, 1]");
        }
        // GEO links are at least as reliable as MEO links, which are at
        // least as reliable as LEO ISLs (equalities allowed so a uniform
        // table stays representable).
        if (phi_geo_leo < phi_meo_leo || phi_geo_isl < phi_meo_leo || phi_meo_leo < phi_leo_isl ||
            phi_meo_isl < phi_leo_isl)
            throw std::invalid_argument("phi ordering violated: GEO >= MEO >= LEO required");
    }

    static ReliabilityTable uniform(double p) { return {p, p, p, p, p, p, p}; }
};

/// Latency of a route: sum over hops of d/c + M/r + m + k. A zero-hop
/// route has zero latency.
inline double latency_s(const Route& route, const LinkRateTable& rates, RfScenario scenario,
                        const DelayConstants& consts) {
    double total = 0.0;
    for (const auto& hop : route.hops) {
        total += hop.length_m / consts.light_speed_mps + consts.packet_bits / rates.rate_bps(hop.link, scenario) +
                 consts.queuing_s + consts.processing_s;
    }
    return total;
}

enum class ReliabilityMode {
    Series,      // product of per-hop phi
    LiteralEq2,  // 1 - product of per-hop (1 - phi)
};

/// End-to-end reliability of a route under the chosen combination rule.
inline double reliability(const Route& route, const ReliabilityTable& phis,
                          ReliabilityMode mode = ReliabilityMode::Series) {
    if (mode == ReliabilityMode::Series) {
        double product = 1.0;
        for (const auto& hop : route.hops) product *= phis.phi(hop.link);
        return product;
    }
    double miss = 1.0;
    for (const auto& hop : route.hops) miss *= 1.0 - phis.phi(hop.link);
    return 1.0 - miss;
}

/// Resilience: fraction of successful mission runs, K0 / K.
inline double resilience(const std::vector<bool>& outcomes) {
    if (outcomes.empty()) throw std::invalid_argument("resilience of an empty outcome list");
    long long successes = std::count(outcomes.begin(), outcomes.end(), true);
    return static_cast<double>(successes) / static_cast<double>(outcomes.size());
}

/// Streaming accumulator for mean/min/max/stddev (population).
struct Stats {
    long long count = 0;
    double mean = 0.0;
    double m2 = 0.0;
    double min = 0.0;
    double max = 0.0;

    void add(double x) {
        if (count == 0) {
            min = max = x;
        } else {
            min = std::min(min, x);
            max = std::max(max, x);
        }
        ++count;
        const double delta = x - mean;
        mean += delta / static_cast<double>(count);
        m2 += delta * (x - mean);
    }

    double stddev() const { return count > 0 ? std::sqrt(m2 / static_cast<double>(count)) : 0.0; }
};

}  // namespace satmln
