// satmln command-line front end: run missions, export access statistics
// and figure-ready data series.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "satmln/engine.hpp"
#include "satmln/report_io.hpp"

namespace {

struct CommonOptions {
    std::string config;
    std::string out;
    std::string format = "csv";
    std::string schemes;
    std::string scenarios;
    std::string stochastic;
    std::string reliability_mode;
    uint64_t seed = 0;
    bool seed_set = false;
    double step_s = 0.0;
    bool step_set = false;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

satmln::Scenario load_with_overrides(const CommonOptions& opt) {
    satmln::Scenario sc = opt.config == "default" ? satmln::default_scenario()
                                                  : satmln::load_scenario_file(opt.config);
    if (!opt.schemes.empty()) {
        sc.schemes.clear();
        for (const auto& name : split_list(opt.schemes)) sc.schemes.push_back(satmln::parse_scheme(name));
    }
    if (!opt.scenarios.empty()) {
        sc.rf_scenarios.clear();
        for (const auto& name : split_list(opt.scenarios)) {
            if (name == "S1") sc.rf_scenarios.push_back(satmln::RfScenario::S1);
            else if (name == "S2") sc.rf_scenarios.push_back(satmln::RfScenario::S2);
            else if (name == "S3") sc.rf_scenarios.push_back(satmln::RfScenario::S3);
            else if (name == "S4") sc.rf_scenarios.push_back(satmln::RfScenario::S4);
            else throw satmln::ConfigError("--scenarios: unknown scenario '" + name + "'");
        }
    }
    if (opt.seed_set) sc.seed = opt.seed;
    if (!opt.stochastic.empty()) {
        if (opt.stochastic == "on") sc.stochastic = true;
        else if (opt.stochastic == "off") sc.stochastic = false;
        else throw satmln::ConfigError("--stochastic: expected 'on' or 'off'");
    }
    if (!opt.reliability_mode.empty()) {
        if (opt.reliability_mode == "series") sc.reliability_mode = satmln::ReliabilityMode::Series;
        else if (opt.reliability_mode == "literal") sc.reliability_mode = satmln::ReliabilityMode::LiteralEq2;
        else throw satmln::ConfigError("--reliability-mode: expected 'series' or 'literal'");
    }
    sc.validate();
    return sc;
}

void check_format(const std::string& format) {
    if (format != "csv" && format != "json")
        throw satmln::ConfigError("--format: expected 'csv' or 'json'");
}

/// Stream sink: --out path, or stdout when no path was given.
class OutputSink {
public:
    explicit OutputSink(const std::string& path) {
        if (!path.empty()) {
            file_.open(path, std::ios::binary);
            if (!file_) throw satmln::ConfigError("cannot open output file '" + path + "'");
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }
    bool to_file() const { return file_.is_open(); }

private:
    std::ofstream file_;
};

int cmd_run(const CommonOptions& opt) {
    check_format(opt.format);
    satmln::Scenario sc = load_with_overrides(opt);
    if (opt.step_set) {
        sc.t_sample_s = opt.step_s;
        sc.validate();
    }
    const satmln::MissionReport report = satmln::run_mission(sc);
    OutputSink sink(opt.out);
    if (opt.format == "csv") satmln::write_records_csv(report, sink.stream());
    else satmln::write_records_json(report, sink.stream());
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
    satmln::write_comparison_text(report, sink.to_file() ? std::cout : std::cerr);
    return 0;
}

int cmd_access(const CommonOptions& opt) {
    check_format(opt.format);
    const satmln::Scenario sc = load_with_overrides(opt);
    const double step = opt.step_set ? opt.step_s : sc.t_sample_s;
    const auto rows = satmln::compute_access_rows(sc, step);
    OutputSink sink(opt.out);
    if (opt.format == "csv") satmln::write_access_csv(rows, sink.stream());
    else satmln::write_access_json(rows, sink.stream());
    return 0;
}

int cmd_figures(const CommonOptions& opt, const std::string& out_dir, const std::string& series_list) {
    check_format(opt.format);
    satmln::Scenario sc = load_with_overrides(opt);
    if (opt.step_set) {
        sc.t_sample_s = opt.step_s;
        sc.validate();
    }

    std::vector<satmln::FigureSeries> series;
    if (series_list.empty()) {
        series = {satmln::FigureSeries::Hops, satmln::FigureSeries::PathLen, satmln::FigureSeries::Latency,
                  satmln::FigureSeries::Resilience, satmln::FigureSeries::Reliability};
    } else {
        for (const auto& name : split_list(series_list)) series.push_back(satmln::parse_figure_series(name));
    }
    if (series.empty()) throw satmln::ConfigError("--series: at least one series required");

    const satmln::MissionReport report = satmln::run_mission(sc);
    std::filesystem::create_directories(out_dir);
    for (satmln::FigureSeries f : series) {
        const auto rows = satmln::figure_rows(report, f, sc.reliability_mode);
        const std::string ext = opt.format == "csv" ? ".csv" : ".json";
        const std::filesystem::path path = std::filesystem::path(out_dir) / (figure_series_name(f) + ext);
        std::ofstream out(path, std::ios::binary);
        if (!out) throw satmln::ConfigError("cannot open output file '" + path.string() + "'");
        if (opt.format == "csv") satmln::write_rows_csv(rows, out);
        else satmln::write_rows_json(rows, out);
        std::cout << "wrote " << path.string() << '\n';
    }
    return 0;
}

void add_common_options(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--config", opt.config, "Scenario config file, or 'default' for built-in defaults")
        ->required();
    cmd->add_option("--out", opt.out, "Output file (default: stdout)");
    cmd->add_option("--format", opt.format, "Output format: csv or json");
    cmd->add_option("--schemes", opt.schemes, "Comma-separated scheme subset (mln,traditional,geo_only,leo_mln)");
    cmd->add_option("--scenarios", opt.scenarios, "Comma-separated RF scenario subset (S1,S2,S3,S4)");
    cmd->add_option("--seed", opt.seed, "Override the stochastic seed")->each([&opt](const std::string&) {
        opt.seed_set = true;
    });
    cmd->add_option("--step", opt.step_s, "Override the sample step in seconds")
        ->each([&opt](const std::string&) { opt.step_set = true; });
    cmd->add_option("--stochastic", opt.stochastic, "Stochastic link failures: on or off");
    cmd->add_option("--reliability-mode", opt.reliability_mode, "Reliability combination: series or literal");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multi-layer satellite network TC delivery simulator"};
    app.require_subcommand(1);

    CommonOptions run_opt, access_opt, figures_opt;
    std::string out_dir = ".";
    std::string series_list;

    CLI::App* run = app.add_subcommand("run", "Run the mission grid and emit per-record results");
    add_common_options(run, run_opt);

    CLI::App* access = app.add_subcommand("access", "Emit per-satellite GS access fractions");
    add_common_options(access, access_opt);

    CLI::App* figures = app.add_subcommand("figures", "Emit tidy per-figure data series");
    add_common_options(figures, figures_opt);
    figures->add_option("--out-dir", out_dir, "Directory for the per-figure files");
    figures->add_option("--series", series_list,
                        "Comma-separated series subset (hops,pathlen,latency,resilience,reliability)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    try {
        if (run->parsed()) return cmd_run(run_opt);
        if (access->parsed()) return cmd_access(access_opt);
        if (figures->parsed()) return cmd_figures(figures_opt, out_dir, series_list);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
