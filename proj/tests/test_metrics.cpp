#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "satmln/metrics.hpp"

using namespace satmln;
using Catch::Approx;

namespace {

NodeRef gs_node() { return NodeRef::ground(); }
NodeRef sat_node(Layer layer, int ordinal) { return NodeRef::sat({layer, 0, ordinal, ordinal}); }

/// Endpoint pair producing the requested link class.
std::pair<NodeRef, NodeRef> endpoints_for(LinkType lt, int salt) {
    switch (lt) {
        case LinkType::GsLeo: return {gs_node(), sat_node(Layer::Leo, salt)};
        case LinkType::GsMeo: return {gs_node(), sat_node(Layer::Meo, salt)};
        case LinkType::GsGeo: return {gs_node(), sat_node(Layer::Geo, salt)};
        case LinkType::LeoLeo: return {sat_node(Layer::Leo, salt), sat_node(Layer::Leo, salt + 1)};
        case LinkType::MeoMeo: return {sat_node(Layer::Meo, salt), sat_node(Layer::Meo, salt + 1)};
        case LinkType::MeoLeo: return {sat_node(Layer::Meo, salt), sat_node(Layer::Leo, salt + 1)};
        case LinkType::GeoGeo: return {sat_node(Layer::Geo, salt), sat_node(Layer::Geo, salt + 1)};
        case LinkType::GeoLeo: return {sat_node(Layer::Geo, salt), sat_node(Layer::Leo, salt + 1)};
    }
    throw std::logic_error("unreachable");
}

Route make_route(const std::vector<std::pair<LinkType, double>>& hops, LayerUsed layer = LayerUsed::Leo) {
    Route r;
    r.layer_used = layer;
    int salt = 0;
    for (const auto& [lt, len] : hops) {
        auto [from, to] = endpoints_for(lt, salt);
        r.push_hop(from, to, len);
        salt += 2;
    }
    return r;
}

constexpr LinkType kAllLinkTypes[] = {LinkType::GsLeo,  LinkType::GsMeo,  LinkType::GsGeo,
                                      LinkType::LeoLeo, LinkType::MeoMeo, LinkType::MeoLeo,
                                      LinkType::GeoGeo, LinkType::GeoLeo};

/// Independently coded latency sum: per hop d/c + M/r + m + k.
double latency_oracle(const Route& route, const LinkRateTable& rates, RfScenario sc,
                      const DelayConstants& c) {
    double total = 0.0;
    for (const auto& hop : route.hops) {
        const double rate = rates.rate_bps(hop.link, sc);
        total += hop.length_m / c.light_speed_mps;
        total += c.packet_bits / rate;
        total += c.queuing_s;
        total += c.processing_s;
    }
    return total;
}

}  // namespace

TEST_CASE("latency of a single Ka hop") {
    const DelayConstants c;
    const LinkRateTable rates;
    const Route r = make_route({{LinkType::GsLeo, 1000e3}});

    // Hand arithmetic: 1e6/c + 8192/324e6 + 1e-4 + 1e-4.
    const double expected = 1000e3 / 299792458.0 + 8192.0 / 324e6 + 2e-4;
    CHECK(expected == Approx(3.561e-3).margin(1e-6));
    CHECK(latency_s(r, rates, RfScenario::S1, c) == Approx(expected).epsilon(1e-15));
}

TEST_CASE("latency of a zero-hop route is zero") {
    Route r;
    CHECK(latency_s(r, LinkRateTable{}, RfScenario::S1, DelayConstants{}) == 0.0);
}

TEST_CASE("latency of a single L-band GEO hop in S2") {
    const DelayConstants c;
    const LinkRateTable rates;
    const Route r = make_route({{LinkType::GeoLeo, 35786e3}}, LayerUsed::Geo);
    const double expected = 35786e3 / 299792458.0 + 8192.0 / 150e3 + 2e-4;
    CHECK(expected == Approx(0.17418).margin(1e-5));  // 119.37 ms + 54.61 ms + 0.2 ms
    CHECK(latency_s(r, rates, RfScenario::S2, c) == Approx(expected).epsilon(1e-15));
}

TEST_CASE("latency equals the independent oracle on random routes") {
    std::mt19937 gen(3);
    std::uniform_int_distribution<int> n_hops(1, 12);
    std::uniform_int_distribution<int> lt_pick(0, 7);
    std::uniform_real_distribution<double> len(1e3, 8e7);
    const DelayConstants c;
    const LinkRateTable rates;
    for (int i = 0; i < 1000; ++i) {
        std::vector<std::pair<LinkType, double>> hops;
        const int n = n_hops(gen);
        for (int h = 0; h < n; ++h) hops.push_back({kAllLinkTypes[lt_pick(gen)], len(gen)});
        const Route r = make_route(hops);
        for (RfScenario sc : {RfScenario::S1, RfScenario::S2, RfScenario::S3, RfScenario::S4}) {
            const double got = latency_s(r, rates, sc, c);
            const double want = latency_oracle(r, rates, sc, c);
            CHECK(got == Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("latency is monotone in its inputs") {
    const DelayConstants c;
    const LinkRateTable rates;
    const Route base = make_route({{LinkType::GsLeo, 1500e3}, {LinkType::LeoLeo, 3000e3}});
    const double d0 = latency_s(base, rates, RfScenario::S1, c);

    Route longer = base;
    longer.hops[1].length_m += 1.0;
    CHECK(latency_s(longer, rates, RfScenario::S1, c) > d0);

    DelayConstants bigger_packet = c;
    bigger_packet.packet_bits *= 2.0;
    CHECK(latency_s(base, rates, RfScenario::S1, bigger_packet) > d0);

    DelayConstants more_queuing = c;
    more_queuing.queuing_s += 1e-5;
    CHECK(latency_s(base, rates, RfScenario::S1, more_queuing) > d0);

    DelayConstants more_processing = c;
    more_processing.processing_s += 1e-5;
    CHECK(latency_s(base, rates, RfScenario::S1, more_processing) > d0);

    LinkRateTable slower = rates;
    slower.ka_bps /= 2.0;
    CHECK(latency_s(base, slower, RfScenario::S1, c) > d0);
}

TEST_CASE("latency under all-FSO never exceeds all-Ka when FSO is faster") {
    std::mt19937 gen(19);
    std::uniform_int_distribution<int> n_hops(1, 10);
    std::uniform_int_distribution<int> lt_pick(0, 7);
    std::uniform_real_distribution<double> len(1e3, 8e7);
    const DelayConstants c;
    const LinkRateTable rates;  // FSO 1.8 Gbps >= Ka 324 Mbps
    for (int i = 0; i < 200; ++i) {
        std::vector<std::pair<LinkType, double>> hops;
        const int n = n_hops(gen);
        for (int h = 0; h < n; ++h) hops.push_back({kAllLinkTypes[lt_pick(gen)], len(gen)});
        const Route r = make_route(hops);
        CHECK(latency_s(r, rates, RfScenario::S4, c) <= latency_s(r, rates, RfScenario::S1, c));
    }
}

TEST_CASE("band assignment follows the scenario table") {
    CHECK(LinkRateTable::band_for(LinkType::GsGeo, RfScenario::S1) == Band::Ka);
    CHECK(LinkRateTable::band_for(LinkType::GeoGeo, RfScenario::S2) == Band::L);
    CHECK(LinkRateTable::band_for(LinkType::GeoLeo, RfScenario::S2) == Band::L);
    CHECK(LinkRateTable::band_for(LinkType::GsGeo, RfScenario::S2) == Band::Ka);
    CHECK(LinkRateTable::band_for(LinkType::MeoMeo, RfScenario::S2) == Band::Ka);
    CHECK(LinkRateTable::band_for(LinkType::GsLeo, RfScenario::S3) == Band::Fso);
    CHECK(LinkRateTable::band_for(LinkType::LeoLeo, RfScenario::S3) == Band::Ka);
    CHECK(LinkRateTable::band_for(LinkType::MeoLeo, RfScenario::S4) == Band::Fso);
}

TEST_CASE("reliability of a single hop is its phi in both modes") {
    ReliabilityTable t;
    const Route r = make_route({{LinkType::LeoLeo, 1e6}});
    CHECK(reliability(r, t, ReliabilityMode::Series) == Approx(0.998).epsilon(1e-15));
    CHECK(reliability(r, t, ReliabilityMode::LiteralEq2) == Approx(0.998).epsilon(1e-12));
}

TEST_CASE("series reliability is the plain product") {
    const ReliabilityTable t = ReliabilityTable::uniform(0.999);
    const Route r = make_route({{LinkType::GeoGeo, 1e6}, {LinkType::GeoGeo, 1e6}, {LinkType::GeoLeo, 1e6}});
    CHECK(reliability(r, t, ReliabilityMode::Series) == Approx(0.997002999).epsilon(1e-12));
}

TEST_CASE("literal mode substitutes into the printed formula") {
    const ReliabilityTable t = ReliabilityTable::uniform(0.9);
    const Route r = make_route({{LinkType::LeoLeo, 1e6}, {LinkType::LeoLeo, 1e6}});
    CHECK(reliability(r, t, ReliabilityMode::LiteralEq2) == Approx(0.99).epsilon(1e-12));
}

TEST_CASE("series stays below min phi, literal above max phi, exhaustively") {
    const double phis[] = {0.9, 0.998, 0.999, 1.0};
    for (int n : {2, 3}) {
        std::vector<int> idx(n, 0);
        while (true) {
            Route r;
            double min_phi = 1.0, max_phi = 0.0;
            for (int h = 0; h < n; ++h) {
                auto [from, to] = endpoints_for(LinkType::LeoLeo, 2 * h);
                r.push_hop(from, to, 1e6);
                min_phi = std::min(min_phi, phis[idx[h]]);
                max_phi = std::max(max_phi, phis[idx[h]]);
            }
            // Mixed phi per hop needs a custom evaluation: fold by hand.
            double series = 1.0, miss = 1.0;
            for (int h = 0; h < n; ++h) {
                series *= phis[idx[h]];
                miss *= 1.0 - phis[idx[h]];
            }
            const double literal = 1.0 - miss;
            CHECK(series <= min_phi + 1e-15);
            CHECK(literal >= max_phi - 1e-15);
            // Against the uniform-table implementation when all hops share phi.
            if (min_phi == max_phi) {
                const ReliabilityTable t = ReliabilityTable::uniform(min_phi);
                CHECK(reliability(r, t, ReliabilityMode::Series) == Approx(series).epsilon(1e-12));
                CHECK(reliability(r, t, ReliabilityMode::LiteralEq2) == Approx(literal).margin(1e-12));
            }

            int pos = n - 1;
            while (pos >= 0 && idx[pos] == 3) idx[pos--] = 0;
            if (pos < 0) break;
            ++idx[pos];
        }
    }
}

TEST_CASE("resilience is the success fraction") {
    const std::vector<bool> all_good{true, true, true};
    const std::vector<bool> all_bad{false, false};
    const std::vector<bool> mixed{true, false, true, false};
    CHECK(resilience(all_good) == 1.0);
    CHECK(resilience(all_bad) == 0.0);
    CHECK(resilience(mixed) == 0.5);
    CHECK_THROWS_AS(resilience(std::vector<bool>{}), std::invalid_argument);
}

TEST_CASE("resilience is permutation-invariant") {
    std::vector<bool> outcomes;
    std::mt19937 gen(41);
    std::bernoulli_distribution flip(0.7);
    for (int i = 0; i < 50; ++i) outcomes.push_back(flip(gen));
    const double base = resilience(outcomes);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(outcomes.begin(), outcomes.end(), gen);
        CHECK(resilience(outcomes) == base);
    }
}

TEST_CASE("reliability table defaults keep the published ordering") {
    ReliabilityTable t;
    t.validate();
    CHECK(t.phi_geo_leo >= t.phi_meo_leo);
    CHECK(t.phi_meo_leo > t.phi_leo_isl);
    CHECK(t.phi(LinkType::GsLeo) == 0.9985);
    CHECK(t.phi(LinkType::GsGeo) == 0.9990);

    ReliabilityTable bad = t;
    bad.phi_meo_leo = 0.9;  // below the LEO ISL value
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    CHECK_NOTHROW(ReliabilityTable::uniform(0.999).validate());
}

TEST_CASE("stats accumulator matches a naive two-pass oracle") {
    std::mt19937 gen(47);
    std::uniform_real_distribution<double> u(-5.0, 17.0);
    std::vector<double> xs;
    Stats stats;
    for (int i = 0; i < 500; ++i) {
        const double x = u(gen);
        xs.push_back(x);
        stats.add(x);
    }
    double sum = 0.0;
    for (double x : xs) sum += x;
    const double mean = sum / xs.size();
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    var /= xs.size();
    CHECK(stats.mean == Approx(mean).epsilon(1e-12));
    CHECK(stats.stddev() == Approx(std::sqrt(var)).epsilon(1e-9));
    CHECK(stats.min == *std::min_element(xs.begin(), xs.end()));
    CHECK(stats.max == *std::max_element(xs.begin(), xs.end()));
}
