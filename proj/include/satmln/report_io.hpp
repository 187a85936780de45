#pragma once

#include <charconv>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "satmln/engine.hpp"

namespace satmln {

/// Shortest round-trip decimal form of a double (stable across runs).
inline std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline const std::string& records_csv_header() {
    static const std::string header =
        "target_id,sample_time,scheme,scenario,hops,path_m,latency_s,reliability,success";
    return header;
}

/// Per-record CSV; metric columns are empty for failed missions.
inline void write_records_csv(const MissionReport& report, std::ostream& out) {
    out << records_csv_header() << '\n';
    for (const auto& r : report.records) {
        out << r.target_ordinal << ',' << format_utc(r.sample_time) << ',' << scheme_name(r.scheme) << ','
            << rf_scenario_name(r.rf) << ',';
        if (r.hop_count) out << *r.hop_count;
        out << ',';
        if (r.path_length_m) out << format_double(*r.path_length_m);
        out << ',';
        if (r.latency_s) out << format_double(*r.latency_s);
        out << ',';
        if (r.reliability_value) out << format_double(*r.reliability_value);
        out << ',' << (r.outcome.success ? 1 : 0) << '\n';
    }
}

inline nlohmann::json record_to_json(const MissionRecord& r) {
    nlohmann::json j;
    j["target_id"] = r.target_ordinal;
    j["sample_time"] = format_utc(r.sample_time);
    j["scheme"] = scheme_name(r.scheme);
    j["scenario"] = rf_scenario_name(r.rf);
    j["hops"] = r.hop_count ? nlohmann::json(*r.hop_count) : nlohmann::json(nullptr);
    j["path_m"] = r.path_length_m ? nlohmann::json(*r.path_length_m) : nlohmann::json(nullptr);
    j["latency_s"] = r.latency_s ? nlohmann::json(*r.latency_s) : nlohmann::json(nullptr);
    j["reliability"] = r.reliability_value ? nlohmann::json(*r.reliability_value) : nlohmann::json(nullptr);
    j["success"] = r.outcome.success;
    j["layer_used"] = layer_used_name(r.outcome.layer_used);
    if (r.outcome.failure_reason) j["failure_reason"] = failure_reason_name(*r.outcome.failure_reason);
    return j;
}

inline void write_records_json(const MissionReport& report, std::ostream& out) {
    nlohmann::json j;
    j["records"] = nlohmann::json::array();
    for (const auto& r : report.records) j["records"].push_back(record_to_json(r));
    nlohmann::json cmp;
    const ComparisonTable table = compare_schemes(report);
    for (const auto& [scheme, v] : table.lambda) cmp["lambda"][scheme_name(scheme)] = v;
    for (const auto& [scheme, v] : table.mean_hops) cmp["mean_hops"][scheme_name(scheme)] = v;
    for (const auto& [scheme, v] : table.mean_path_m) cmp["mean_path_m"][scheme_name(scheme)] = v;
    for (const auto& [key, v] : table.mean_latency_s)
        cmp["mean_latency_s"][scheme_name(key.first)][rf_scenario_name(key.second)] = v;
    for (const auto& [rf, v] : table.geo_over_mln_latency)
        cmp["geo_over_mln_latency"][rf_scenario_name(rf)] = v;
    j["comparison"] = cmp;
    j["warnings"] = report.warnings;
    out << j.dump(2) << '\n';
}

/// Human-readable scheme comparison, printed after a run.
inline void write_comparison_text(const MissionReport& report, std::ostream& out) {
    const ComparisonTable table = compare_schemes(report);
    out << "scheme        lambda   mean_hops  mean_path_m\n";
    for (const auto& [scheme, v] : table.lambda) {
        char line[128];
        const auto hops = table.mean_hops.count(scheme) ? table.mean_hops.at(scheme) : 0.0;
        const auto path = table.mean_path_m.count(scheme) ? table.mean_path_m.at(scheme) : 0.0;
        std::snprintf(line, sizeof(line), "%-12s  %.4f   %8.3f  %11.0f\n", scheme_name(scheme), v, hops, path);
        out << line;
    }
    if (!table.mean_latency_s.empty()) {
        out << "mean latency [ms]:\n";
        for (const auto& [key, v] : table.mean_latency_s) {
            char line[128];
            std::snprintf(line, sizeof(line), "  %-12s %s  %10.3f\n", scheme_name(key.first),
                          rf_scenario_name(key.second), v * 1e3);
            out << line;
        }
    }
    for (const auto& [rf, v] : table.geo_over_mln_latency) {
        char line[128];
        std::snprintf(line, sizeof(line), "geo_only/mln latency ratio %s: %.4f\n", rf_scenario_name(rf), v);
        out << line;
    }
}

// ---------------------------------------------------------------------------
// Access-fraction export
// ---------------------------------------------------------------------------

struct AccessRow {
    Layer layer;
    int ordinal;
    int plane;
    int index_in_plane;
    double fraction;
};

inline std::vector<AccessRow> compute_access_rows(const Scenario& sc, double step_s) {
    std::vector<AccessRow> rows;
    auto add_layer = [&](const std::vector<Satellite>& sats) {
        for (const auto& s : sats) {
            rows.push_back({s.id.layer, s.id.ordinal, s.id.plane, s.id.index_in_plane,
                            access_fraction(sc.gs, s, sc.t_start, sc.t_end, step_s)});
        }
    };
    add_layer(sc.sats.leo);
    add_layer(sc.sats.meo);
    add_layer(sc.sats.geo);
    return rows;
}

inline void write_access_csv(const std::vector<AccessRow>& rows, std::ostream& out) {
    out << "layer,ordinal,plane,index_in_plane,access_fraction\n";
    for (const auto& r : rows) {
        out << layer_name(r.layer) << ',' << r.ordinal << ',' << r.plane << ',' << r.index_in_plane << ','
            << format_double(r.fraction) << '\n';
    }
}

inline void write_access_json(const std::vector<AccessRow>& rows, std::ostream& out) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& r : rows) {
        j.push_back({{"layer", layer_name(r.layer)},
                     {"ordinal", r.ordinal},
                     {"plane", r.plane},
                     {"index_in_plane", r.index_in_plane},
                     {"access_fraction", r.fraction}});
    }
    out << j.dump(2) << '\n';
}

// ---------------------------------------------------------------------------
// Figure data series (tidy tables mirroring the evaluation plots)
// ---------------------------------------------------------------------------

enum class FigureSeries { Hops, PathLen, Latency, Resilience, Reliability };

inline const char* figure_series_name(FigureSeries f) {
    switch (f) {
        case FigureSeries::Hops: return "hops";
        case FigureSeries::PathLen: return "pathlen";
        case FigureSeries::Latency: return "latency";
        case FigureSeries::Resilience: return "resilience";
        case FigureSeries::Reliability: return "reliability";
    }
    return "?";
}

inline FigureSeries parse_figure_series(const std::string& name) {
    for (FigureSeries f : {FigureSeries::Hops, FigureSeries::PathLen, FigureSeries::Latency,
                           FigureSeries::Resilience, FigureSeries::Reliability}) {
        if (name == figure_series_name(f)) return f;
    }
    throw std::invalid_argument("unknown figure series '" + name +
                                "' (expected hops, pathlen, latency, resilience, reliability)");
}

/// One tidy row set per figure. The reliability figure carries both the
/// configured phi table and a uniform phi=0.999 variant.
inline std::vector<std::vector<std::string>> figure_rows(const MissionReport& report, FigureSeries series,
                                                         ReliabilityMode mode) {
    std::vector<std::vector<std::string>> rows;
    switch (series) {
        case FigureSeries::Hops:
            rows.push_back({"target_id", "scheme", "mean_hops"});
            for (const auto& [key, stats] : report.summary.by_target_scheme) {
                if (stats.hops.count == 0) continue;
                rows.push_back({std::to_string(key.first), scheme_name(key.second),
                                format_double(stats.hops.mean)});
            }
            break;
        case FigureSeries::PathLen:
            rows.push_back({"target_id", "scheme", "mean_path_m"});
            for (const auto& [key, stats] : report.summary.by_target_scheme) {
                if (stats.path_m.count == 0) continue;
                rows.push_back({std::to_string(key.first), scheme_name(key.second),
                                format_double(stats.path_m.mean)});
            }
            break;
        case FigureSeries::Latency:
            rows.push_back({"target_id", "scheme", "scenario", "mean_latency_s"});
            for (const auto& [key, stats] : report.summary.by_target_scheme) {
                for (const auto& [rf, lat] : stats.latency) {
                    if (lat.count == 0) continue;
                    rows.push_back({std::to_string(key.first), scheme_name(key.second),
                                    rf_scenario_name(rf), format_double(lat.mean)});
                }
            }
            break;
        case FigureSeries::Resilience:
            rows.push_back({"scheme", "lambda"});
            for (const auto& [scheme, stats] : report.summary.by_scheme) {
                rows.push_back({scheme_name(scheme), format_double(stats.lambda())});
            }
            break;
        case FigureSeries::Reliability: {
            rows.push_back({"target_id", "scheme", "phi_model", "mean_reliability"});
            for (const auto& [key, stats] : report.summary.by_target_scheme) {
                if (stats.reliability.count == 0) continue;
                rows.push_back({std::to_string(key.first), scheme_name(key.second), "table",
                                format_double(stats.reliability.mean)});
            }
            // Uniform phi variant recomputed from the retained routes, one
            // fold per mission (first RF slice).
            const ReliabilityTable uniform = ReliabilityTable::uniform(0.999);
            std::map<std::pair<int, SchemeKind>, Stats> uniform_stats;
            if (!report.records.empty()) {
                const RfScenario first_rf = report.records.front().rf;
                for (const auto& r : report.records) {
                    if (r.rf != first_rf || !r.outcome.success) continue;
                    uniform_stats[{r.target_ordinal, r.scheme}].add(
                        reliability(*r.outcome.route, uniform, mode));
                }
            }
            for (const auto& [key, stats] : uniform_stats) {
                rows.push_back({std::to_string(key.first), scheme_name(key.second), "uniform_0.999",
                                format_double(stats.mean)});
            }
            break;
        }
    }
    return rows;
}

inline void write_rows_csv(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << row[i];
        }
        out << '\n';
    }
}

inline void write_rows_json(const std::vector<std::vector<std::string>>& rows, std::ostream& out) {
    nlohmann::json j = nlohmann::json::array();
    if (!rows.empty()) {
        const auto& header = rows.front();
        for (size_t r = 1; r < rows.size(); ++r) {
            nlohmann::json obj;
            for (size_t c = 0; c < header.size(); ++c) obj[header[c]] = rows[r][c];
            j.push_back(obj);
        }
    }
    out << j.dump(2) << '\n';
}

}  // namespace satmln
