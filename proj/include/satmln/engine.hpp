#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "satmln/metrics.hpp"
#include "satmln/schemes.hpp"

namespace satmln {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Full parameter set of one simulation: ground segment, the three
/// constellations, mission clock, link tables and evaluation selections.
struct Scenario {
    GroundStation gs;
    ConstellationSet sats;
    UtcTime t_start;
    UtcTime t_end;
    double t_sample_s = 3600.0;
    DelayConstants delay;
    LinkRateTable rates;
    ReliabilityTable phis;
    std::vector<SchemeKind> schemes;
    std::vector<RfScenario> rf_scenarios;
    uint64_t seed = 1;
    bool stochastic = false;
    ReliabilityMode reliability_mode = ReliabilityMode::Series;

    int sample_count() const {
        int n = 0;
        for (UtcTime t = t_start; t < t_end; t = t.plus_seconds(t_sample_s)) ++n;
        return n;
    }

    std::vector<UtcTime> sample_times() const {
        std::vector<UtcTime> out;
        for (UtcTime t = t_start; t < t_end; t = t.plus_seconds(t_sample_s)) out.push_back(t);
        return out;
    }

    void validate() const {
        gs.validate();
        delay.validate();
        rates.validate();
        phis.validate();
        if (!(t_start < t_end)) throw ConfigError("T_end: must be after T_start");
        if (t_sample_s <= 0.0) throw ConfigError("T_sample: must be positive");
        if (schemes.empty()) throw ConfigError("schemes: at least one scheme required");
        if (rf_scenarios.empty()) throw ConfigError("scenarios: at least one of S1-S4 required");
    }
};

/// Defaults: Calgary GS, 6x13 polar LEO shell at 1015 km / 98.98 deg,
/// 20-satellite MEO ring at 8062 km, 3-slot GEO belt, 24 h mission sampled
/// hourly, published link rates and reliabilities.
inline Scenario default_scenario() {
    Scenario sc;
    sc.gs.site = {51.0447, -114.0719, 0.0};
    sc.gs.min_elevation_ngso_deg = 25.0;
    sc.gs.min_elevation_geo_meo_deg = 10.0;
    sc.gs.name = "Calgary";
    sc.t_start = parse_utc("2022-08-14 01:00:00");
    sc.t_end = parse_utc("2022-08-15 01:00:00");
    sc.t_sample_s = 3600.0;

    ConstellationSpec leo{Layer::Leo, 6, 13, 1015e3, 98.98, std::nullopt, 180.0};
    ConstellationSpec meo{Layer::Meo, 1, 20, 8062e3, 0.0, std::nullopt, 360.0};
    ConstellationSpec geo{Layer::Geo, 1, 3, 35786e3, 0.0, std::nullopt, 360.0};
    sc.sats.leo = generate_constellation(leo, sc.t_start);
    sc.sats.meo = generate_constellation(meo, sc.t_start);
    sc.sats.geo = generate_constellation(geo, sc.t_start);

    sc.schemes = {SchemeKind::Mln, SchemeKind::Traditional, SchemeKind::GeoOnly, SchemeKind::LeoMln};
    sc.rf_scenarios = {RfScenario::S1, RfScenario::S2, RfScenario::S3, RfScenario::S4};
    return sc;
}

namespace detail {

inline void check_known_keys(const nlohmann::json& obj, const std::set<std::string>& known,
                             const std::string& path) {
    std::vector<std::string> unknown;
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!known.count(it.key())) unknown.push_back(path.empty() ? it.key() : path + "." + it.key());
    }
    if (!unknown.empty()) {
        std::string msg = "unknown configuration keys:";
        for (const auto& k : unknown) msg += " " + k;
        throw ConfigError(msg);
    }
}

template <typename T>
void read_field(const nlohmann::json& obj, const char* key, T& out, const std::string& path) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError((path.empty() ? std::string(key) : path + "." + key) + ": wrong type");
    }
}

inline std::vector<Satellite> load_constellation(const nlohmann::json& obj, Layer layer, UtcTime epoch,
                                                 const std::string& path) {
    check_known_keys(obj,
                     {"planes", "sats_per_plane", "altitude_km", "inclination_deg", "phasing_offset_deg",
                      "raan_spread_deg", "tle_file"},
                     path);
    if (obj.contains("tle_file")) {
        std::string file;
        read_field(obj, "tle_file", file, path);
        std::ifstream in(file);
        if (!in) throw ConfigError(path + ".tle_file: cannot open '" + file + "'");
        std::stringstream buf;
        buf << in.rdbuf();
        std::vector<Satellite> sats;
        int ordinal = 0;
        for (const auto& rec : parse_tle(buf.str())) {
            Satellite s;
            s.id = {layer, 0, ordinal, ordinal};
            s.elements = rec.parsed;
            sats.push_back(s);
            ++ordinal;
        }
        if (sats.empty()) throw ConfigError(path + ".tle_file: no records in '" + file + "'");
        return sats;
    }

    ConstellationSpec spec;
    spec.layer = layer;
    switch (layer) {
        case Layer::Leo: spec = {layer, 6, 13, 1015e3, 98.98, std::nullopt, 180.0}; break;
        case Layer::Meo: spec = {layer, 1, 20, 8062e3, 0.0, std::nullopt, 360.0}; break;
        case Layer::Geo: spec = {layer, 1, 3, 35786e3, 0.0, std::nullopt, 360.0}; break;
    }
    read_field(obj, "planes", spec.plane_count, path);
    read_field(obj, "sats_per_plane", spec.sats_per_plane, path);
    double altitude_km = spec.altitude_m / 1e3;
    read_field(obj, "altitude_km", altitude_km, path);
    spec.altitude_m = altitude_km * 1e3;
    read_field(obj, "inclination_deg", spec.inclination_deg, path);
    read_field(obj, "raan_spread_deg", spec.raan_spread_deg, path);
    if (obj.contains("phasing_offset_deg")) {
        double phasing = 0.0;
        read_field(obj, "phasing_offset_deg", phasing, path);
        spec.phasing_offset_deg = phasing;
    }
    try {
        return generate_constellation(spec, epoch);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

}  // namespace detail

/// Build a Scenario from a JSON document. Every key is optional; an empty
/// document yields the defaults. Unknown keys are rejected (listed in the
/// error), and invariant violations name the offending field.
inline Scenario load_scenario(const std::string& config_text) {
    std::string text = config_text;
    if (text.find_first_not_of(" \t\r\n") == std::string::npos) text = "{}";
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config root must be a JSON object");

    detail::check_known_keys(
        doc, {"gs",        "minElev1",  "minElev2", "T_start",    "T_end",     "T_sample", "M",
              "k",         "m",         "r_k",      "r_l",        "r_o",       "phi_1",    "phi_2",
              "phi_3",     "phi_4",     "phi_gs_ngso", "phi_gs_geo", "leo",    "meo",      "geo",
              "schemes",   "scenarios", "seed",     "stochastic", "reliability_mode"},
        "");

    Scenario sc = default_scenario();

    if (doc.contains("gs")) {
        const auto& gs = doc.at("gs");
        if (!gs.is_object()) throw ConfigError("gs: must be an object");
        detail::check_known_keys(gs, {"lat", "lng", "alt_m", "name"}, "gs");
        detail::read_field(gs, "lat", sc.gs.site.latitude_deg, "gs");
        detail::read_field(gs, "lng", sc.gs.site.longitude_deg, "gs");
        detail::read_field(gs, "alt_m", sc.gs.site.altitude_m, "gs");
        detail::read_field(gs, "name", sc.gs.name, "gs");
    }
    detail::read_field(doc, "minElev1", sc.gs.min_elevation_ngso_deg, "");
    detail::read_field(doc, "minElev2", sc.gs.min_elevation_geo_meo_deg, "");

    std::string t_start_text, t_end_text;
    detail::read_field(doc, "T_start", t_start_text, "");
    detail::read_field(doc, "T_end", t_end_text, "");
    try {
        if (!t_start_text.empty()) sc.t_start = parse_utc(t_start_text);
        if (!t_end_text.empty()) sc.t_end = parse_utc(t_end_text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("T_start/T_end: ") + e.what());
    }
    detail::read_field(doc, "T_sample", sc.t_sample_s, "");

    double packet_bytes = sc.delay.packet_bits / 8.0;
    detail::read_field(doc, "M", packet_bytes, "");
    sc.delay.packet_bits = packet_bytes * 8.0;
    detail::read_field(doc, "k", sc.delay.processing_s, "");
    detail::read_field(doc, "m", sc.delay.queuing_s, "");

    detail::read_field(doc, "r_k", sc.rates.ka_bps, "");
    detail::read_field(doc, "r_l", sc.rates.l_bps, "");
    detail::read_field(doc, "r_o", sc.rates.fso_bps, "");

    detail::read_field(doc, "phi_1", sc.phis.phi_leo_isl, "");
    double phi2 = sc.phis.phi_meo_isl;
    detail::read_field(doc, "phi_2", phi2, "");
    sc.phis.phi_meo_isl = sc.phis.phi_geo_isl = phi2;
    detail::read_field(doc, "phi_3", sc.phis.phi_geo_leo, "");
    detail::read_field(doc, "phi_4", sc.phis.phi_meo_leo, "");
    sc.phis.phi_gs_ngso = sc.phis.phi_meo_leo;
    sc.phis.phi_gs_geo = sc.phis.phi_geo_leo;
    detail::read_field(doc, "phi_gs_ngso", sc.phis.phi_gs_ngso, "");
    detail::read_field(doc, "phi_gs_geo", sc.phis.phi_gs_geo, "");

    // Constellations are regenerated so overridden epochs/parameters apply.
    for (const char* key : {"leo", "meo", "geo"}) {
        Layer layer = key[0] == 'l' ? Layer::Leo : key[0] == 'm' ? Layer::Meo : Layer::Geo;
        std::vector<Satellite>& dst = layer == Layer::Leo  ? sc.sats.leo
                                      : layer == Layer::Meo ? sc.sats.meo
                                                            : sc.sats.geo;
        if (doc.contains(key)) {
            const auto& obj = doc.at(key);
            if (obj.is_null()) {
                dst.clear();  // layer explicitly absent
            } else if (obj.is_object()) {
                dst = detail::load_constellation(obj, layer, sc.t_start, key);
            } else {
                throw ConfigError(std::string(key) + ": must be an object or null");
            }
        } else {
            dst = detail::load_constellation(nlohmann::json::object(), layer, sc.t_start, key);
        }
    }

    if (doc.contains("schemes")) {
        std::vector<std::string> names;
        detail::read_field(doc, "schemes", names, "");
        if (names.empty()) throw ConfigError("schemes: at least one scheme required");
        sc.schemes.clear();
        try {
            for (const auto& n : names) sc.schemes.push_back(parse_scheme(n));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("schemes: ") + e.what());
        }
    }
    if (doc.contains("scenarios")) {
        std::vector<std::string> names;
        detail::read_field(doc, "scenarios", names, "");
        sc.rf_scenarios.clear();
        for (const auto& n : names) {
            if (n == "S1") sc.rf_scenarios.push_back(RfScenario::S1);
            else if (n == "S2") sc.rf_scenarios.push_back(RfScenario::S2);
            else if (n == "S3") sc.rf_scenarios.push_back(RfScenario::S3);
            else if (n == "S4") sc.rf_scenarios.push_back(RfScenario::S4);
            else throw ConfigError("scenarios: unknown scenario '" + n + "'");
        }
    }
    detail::read_field(doc, "seed", sc.seed, "");
    detail::read_field(doc, "stochastic", sc.stochastic, "");
    if (doc.contains("reliability_mode")) {
        std::string mode;
        detail::read_field(doc, "reliability_mode", mode, "");
        if (mode == "series") sc.reliability_mode = ReliabilityMode::Series;
        else if (mode == "literal") sc.reliability_mode = ReliabilityMode::LiteralEq2;
        else throw ConfigError("reliability_mode: expected 'series' or 'literal'");
    }

    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

inline Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str());
}

/// Every fourth LEO satellite by global ordinal is a TC target.
inline std::vector<Satellite> select_targets(std::span<const Satellite> leo) {
    if (leo.empty()) throw std::invalid_argument("select_targets: empty LEO constellation");
    std::vector<Satellite> targets;
    for (const auto& s : leo) {
        if (s.id.ordinal % 4 == 0) targets.push_back(s);
    }
    return targets;
}

/// One evaluated (target, sample, scheme, RF scenario) combination.
/// Metric fields are empty for failed missions; failures still count
/// toward resilience.
struct MissionRecord {
    int target_ordinal = 0;
    UtcTime sample_time;
    SchemeKind scheme = SchemeKind::Mln;
    RfScenario rf = RfScenario::S1;
    MissionOutcome outcome;
    std::optional<int> hop_count;
    std::optional<double> path_length_m;
    std::optional<double> latency_s;
    std::optional<double> reliability_value;
};

/// Mean/min/max/stddev rollups per scheme, per (scheme, RF scenario) and
/// per (target, scheme).
struct SchemeStats {
    long long missions = 0;
    long long successes = 0;
    Stats hops;
    Stats path_m;
    Stats reliability;

    double lambda() const {
        return missions > 0 ? static_cast<double>(successes) / static_cast<double>(missions) : 0.0;
    }
};

struct TargetSchemeStats {
    Stats hops;
    Stats path_m;
    Stats reliability;
    std::map<RfScenario, Stats> latency;
};

struct Summary {
    std::map<SchemeKind, SchemeStats> by_scheme;
    std::map<std::pair<SchemeKind, RfScenario>, Stats> latency;
    std::map<std::pair<int, SchemeKind>, TargetSchemeStats> by_target_scheme;
};

struct MissionReport {
    std::vector<MissionRecord> records;
    Summary summary;
    std::vector<std::string> warnings;
};

/// Fold records into summary statistics. Failed missions contribute to
/// lambda only; hop/path/latency/reliability means cover transferred
/// packets.
inline Summary aggregate(std::span<const MissionRecord> records) {
    if (records.empty()) throw std::invalid_argument("aggregate: no records");
    Summary s;
    for (const auto& r : records) {
        auto& sch = s.by_scheme[r.scheme];
        ++sch.missions;
        if (r.outcome.success) ++sch.successes;
        if (!r.outcome.success) continue;
        auto& tgt = s.by_target_scheme[{r.target_ordinal, r.scheme}];
        if (r.latency_s) {
            s.latency[{r.scheme, r.rf}].add(*r.latency_s);
            tgt.latency[r.rf].add(*r.latency_s);
        }
        // Hop/path/reliability are RF-independent; fold them once per
        // mission (on the first RF scenario of the record stream).
        if (r.rf == records.front().rf) {
            if (r.hop_count) {
                sch.hops.add(*r.hop_count);
                tgt.hops.add(*r.hop_count);
            }
            if (r.path_length_m) {
                sch.path_m.add(*r.path_length_m);
                tgt.path_m.add(*r.path_length_m);
            }
            if (r.reliability_value) {
                sch.reliability.add(*r.reliability_value);
                tgt.reliability.add(*r.reliability_value);
            }
        }
    }
    return s;
}

/// Run the full mission grid: every sample time, target, scheme and RF
/// scenario. Satellites are propagated once per sample and the snapshot
/// shared; the stochastic stream is split per (scheme, target, sample),
/// so records are independent of evaluation order.
inline MissionReport run_mission(const Scenario& sc) {
    sc.validate();
    if (sc.sats.leo.empty()) throw ConfigError("leo: mission needs a LEO constellation for targets");

    MissionReport report;
    const auto targets = select_targets(sc.sats.leo);
    const auto times = sc.sample_times();

    std::set<std::pair<int, int>> stale_seen;  // (layer, ordinal)
    auto note_stale = [&](const Satellite& sat, UtcTime t) {
        if (!propagation_is_stale(sat.elements, t)) return;
        if (stale_seen.insert({static_cast<int>(sat.id.layer), sat.id.ordinal}).second) {
            report.warnings.push_back(std::string("stale elements: ") + layer_name(sat.id.layer) + " #" +
                                      std::to_string(sat.id.ordinal) + " propagated " +
                                      format_utc(t) + ", epoch " + format_utc(sat.elements.epoch));
        }
    };

    std::vector<Snapshot> snapshots;
    snapshots.reserve(times.size());
    for (UtcTime t : times) {
        snapshots.push_back(make_snapshot(sc.sats, t));
        for (const auto& s : sc.sats.leo) note_stale(s, t);
        for (const auto& s : sc.sats.meo) note_stale(s, t);
        for (const auto& s : sc.sats.geo) note_stale(s, t);
    }

    for (const auto& target : targets) {
        for (size_t ti = 0; ti < times.size(); ++ti) {
            for (size_t si = 0; si < sc.schemes.size(); ++si) {
                const SchemeKind scheme = sc.schemes[si];
                MissionOutcome outcome;
                if (sc.stochastic) {
                    Rng rng = Rng::split(sc.seed, static_cast<uint64_t>(scheme),
                                         static_cast<uint64_t>(target.id.ordinal), static_cast<uint64_t>(ti));
                    outcome = run_scheme(scheme, sc.gs, target, sc.sats, snapshots[ti], &sc.phis, &rng);
                } else {
                    outcome = run_scheme(scheme, sc.gs, target, sc.sats, snapshots[ti]);
                }
                for (RfScenario rf : sc.rf_scenarios) {
                    MissionRecord rec;
                    rec.target_ordinal = target.id.ordinal;
                    rec.sample_time = times[ti];
                    rec.scheme = scheme;
                    rec.rf = rf;
                    rec.outcome = outcome;
                    if (outcome.success) {
                        rec.hop_count = outcome.route->hop_count();
                        rec.path_length_m = outcome.route->total_length_m;
                        rec.latency_s = latency_s(*outcome.route, sc.rates, rf, sc.delay);
                        rec.reliability_value = reliability(*outcome.route, sc.phis, sc.reliability_mode);
                    }
                    report.records.push_back(std::move(rec));
                }
            }
        }
    }
    report.summary = aggregate(report.records);
    return report;
}

/// Scheme-vs-scheme comparison: per-scenario mean latencies with the
/// GEO-only / layered-scheme ratio, hop and path means, lambda per scheme.
struct ComparisonTable {
    std::map<SchemeKind, double> lambda;
    std::map<SchemeKind, double> mean_hops;
    std::map<SchemeKind, double> mean_path_m;
    std::map<std::pair<SchemeKind, RfScenario>, double> mean_latency_s;
    std::map<RfScenario, double> geo_over_mln_latency;
};

inline ComparisonTable compare_schemes(const MissionReport& report) {
    ComparisonTable table;
    for (const auto& [scheme, stats] : report.summary.by_scheme) {
        table.lambda[scheme] = stats.lambda();
        if (stats.hops.count > 0) table.mean_hops[scheme] = stats.hops.mean;
        if (stats.path_m.count > 0) table.mean_path_m[scheme] = stats.path_m.mean;
    }
    for (const auto& [key, stats] : report.summary.latency) {
        if (stats.count > 0) table.mean_latency_s[key] = stats.mean;
    }
    for (const auto& [key, value] : table.mean_latency_s) {
        if (key.first != SchemeKind::GeoOnly) continue;
        const auto mln = table.mean_latency_s.find({SchemeKind::Mln, key.second});
        if (mln != table.mean_latency_s.end() && mln->second > 0.0)
            table.geo_over_mln_latency[key.second] = value / mln->second;
    }
    return table;
}

}  // namespace satmln
