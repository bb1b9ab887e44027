#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "xlayer/netmodel.hpp"

using namespace xlayer;

namespace {

Scenario two_node_scenario() {
    Scenario s;
    s.nodes = {{0, 0}, {30, 40}};
    s.sink = 1;
    s.compromised = 0;
    s.sources = {{0, 80e3}};
    s.jammer = {{10, 10}, 0.01, true};
    s.rng_seed = 42;
    return s;
}

}  // namespace

TEST(PathGain, UnitDistanceIsFading) {
    ChannelModel m;
    EXPECT_DOUBLE_EQ(path_gain(1.0, 1.0, m), 1.0);
}

TEST(PathGain, CubicDecay) {
    ChannelModel m;
    EXPECT_NEAR(path_gain(10.0, 1.0, m), 1e-3, 1e-15);
}

TEST(PathGain, JammerGeometry) {
    ChannelModel m;
    const double oracle = 0.5 / (40.2 * 40.2 * 40.2);
    EXPECT_NEAR(path_gain(40.2, 0.5, m), oracle, 1e-18);
    EXPECT_NEAR(path_gain(40.2, 0.5, m), 7.70e-6, 1e-8);
}

TEST(PathGain, RejectsCoLocated) {
    ChannelModel m;
    EXPECT_THROW(path_gain(0.0, 1.0, m), ModelError);
    EXPECT_THROW(path_gain(-3.0, 1.0, m), ModelError);
}

TEST(Throughput, SingleChannelSinrThree) {
    ChannelModel m;
    const double eta = m.noise_power_w();
    const std::vector<double> p{3 * eta}, h{1.0}, i{0.0};
    EXPECT_NEAR(link_throughput(p, h, i, m), 20000.0, 1e-6);
}

TEST(Throughput, ZeroPowerIsZero) {
    ChannelModel m;
    const std::vector<double> p(10, 0.0), h(10, 1.0), i(10, 0.0);
    EXPECT_EQ(link_throughput(p, h, i, m), 0.0);
}

TEST(Throughput, TwoChannels) {
    ChannelModel m;
    const double eta = m.noise_power_w();
    const std::vector<double> p{eta, 3 * eta}, h{1.0, 1.0}, i{0.0, 0.0};
    EXPECT_NEAR(link_throughput(p, h, i, m), 30000.0, 1e-6);
}

TEST(Throughput, AdditiveOverDisjointChannels) {
    ChannelModel m;
    const std::vector<double> p{1e-3, 2e-3, 5e-4, 1e-4}, h{1e-5, 3e-6, 8e-6, 2e-5}, i{0, 1e-9, 5e-9, 0};
    const double whole = link_throughput(p, h, i, m);
    const std::span<const double> ps(p), hs(h), is(i);
    const double a = link_throughput(ps.first(2), hs.first(2), is.first(2), m);
    const double b = link_throughput(ps.last(2), hs.last(2), is.last(2), m);
    EXPECT_NEAR(whole, a + b, 1e-9 * whole);
}

TEST(Throughput, MonotoneInInterferenceAndPower) {
    ChannelModel m;
    std::vector<double> p{1e-3, 1e-3}, h{1e-5, 1e-5}, i{0, 0};
    double prev_t = link_throughput(p, h, i, m);
    double prev_d = *link_delay(prev_t, 10e3, m);
    for (double add : {1e-10, 1e-9, 1e-8, 1e-7}) {
        i[1] = add;
        const double t = link_throughput(p, h, i, m);
        const double d = link_delay(t, 10e3, m).value_or(INFINITY);
        EXPECT_LE(t, prev_t);
        EXPECT_GE(d, prev_d);
        prev_t = t;
        prev_d = d;
    }
    i = {0, 0};
    const double base = link_throughput(p, h, i, m);
    p[0] *= 2;
    EXPECT_GE(link_throughput(p, h, i, m), base);
}

TEST(Delay, IdleQueue) {
    ChannelModel m;
    EXPECT_NEAR(*link_delay(100e3, 0.0, m), 0.01, 1e-15);
}

TEST(Delay, LoadedQueue) {
    ChannelModel m;
    EXPECT_NEAR(*link_delay(100e3, 50e3, m), 0.02, 1e-15);
}

TEST(Delay, UnstableQueueIsInfeasible) {
    ChannelModel m;
    EXPECT_FALSE(link_delay(50e3, 50e3, m).has_value());
    EXPECT_FALSE(link_delay(40e3, 50e3, m).has_value());
    EXPECT_THROW(link_delay(40e3, -1.0, m), ModelError);
}

TEST(Delay, StrictlyDecreasingInThroughput) {
    ChannelModel m;
    double prev = INFINITY;
    for (double mu = 60e3; mu < 200e3; mu += 10e3) {
        const double d = *link_delay(mu, 50e3, m);
        EXPECT_LT(d, prev);
        prev = d;
    }
}

TEST(Interference, ZeroJammerPower) {
    auto s = two_node_scenario();
    const auto g = LinkGains::draw(s, 0);
    const auto alloc = PowerAllocation::zero(10, 0.01);
    EXPECT_EQ(received_interference(alloc, g, 1, 3), 0.0);
}

TEST(Interference, OneMilliwattAtJammerDistance) {
    auto s = two_node_scenario();
    LinkGains g(2, 10);
    for (auto& h : g.jammer_link(1)) h = 7.70e-6;
    PowerAllocation alloc = PowerAllocation::zero(10, 0.01);
    alloc.watts[0] = 1e-3;
    const double i = received_interference(alloc, g, 1, 0);
    EXPECT_NEAR(i, 7.70e-9, 1e-15);
    EXPECT_NEAR(10 * std::log10(i / 1e-3), -51.1, 0.05);
}

TEST(Interference, EqualAllocationEqualGainsEqualInterference) {
    LinkGains g(2, 10);
    for (auto& h : g.jammer_link(0)) h = 3e-6;
    PowerAllocation alloc = PowerAllocation::zero(10, 0.01);
    alloc.watts[2] = alloc.watts[5] = 2e-3;
    EXPECT_EQ(received_interference(alloc, g, 0, 2), received_interference(alloc, g, 0, 5));
}

TEST(Fading, MeanWithinTwoPercent) {
    ChannelModel m;
    Rng rng(2024, {static_cast<std::uint64_t>(Stream::gains)});
    const int n = 200000;
    double sum = 0.0;
    for (int k = 0; k < n; ++k) sum += rng.exponential(m.mean_fading());
    EXPECT_NEAR(sum / n, 0.5, 0.01);
}

TEST(Fading, DrawnGainsHaveFadingMean) {
    // Ratio of drawn gain to the path-loss-only gain is the fading coefficient.
    auto s = two_node_scenario();
    s.channel.num_channels = 1;
    double sum = 0.0;
    const int periods = 20000;
    const double d = distance(s.nodes[0], s.nodes[1]);
    for (int p = 0; p < periods; ++p) sum += LinkGains::draw(s, p).link(0, 1)[0] / path_gain(d, 1.0, s.channel);
    EXPECT_NEAR(sum / periods, 0.5, 0.5 * 0.03);
}

TEST(Gains, DeterministicPerSeedAndPeriod) {
    auto s = two_node_scenario();
    EXPECT_EQ(LinkGains::draw(s, 3), LinkGains::draw(s, 3));
    EXPECT_FALSE(LinkGains::draw(s, 3) == LinkGains::draw(s, 4));
    auto t = s;
    t.rng_seed = 43;
    EXPECT_FALSE(LinkGains::draw(s, 3) == LinkGains::draw(t, 3));
}

TEST(Gains, NonNegativeAndZeroOnDiagonal) {
    auto s = two_node_scenario();
    const auto g = LinkGains::draw(s, 0);
    for (int a = 0; a <= 1; ++a)
        for (int b = 0; b < 2; ++b)
            for (double h : g.link(a, b)) EXPECT_GE(h, 0.0);
    for (double h : g.link(0, 0)) EXPECT_EQ(h, 0.0);
}

TEST(Gains, MeanFieldUsesMeanFading) {
    auto s = two_node_scenario();
    const auto g = LinkGains::mean_field(s);
    const double d = distance(s.nodes[0], s.nodes[1]);
    for (double h : g.link(0, 1)) EXPECT_DOUBLE_EQ(h, path_gain(d, 0.5, s.channel));
    const double dj = distance(s.jammer.position, s.nodes[1]);
    for (double h : g.jammer_link(1)) EXPECT_DOUBLE_EQ(h, path_gain(dj, 0.5, s.channel));
}

TEST(ScenarioValidation, RejectsBadFields) {
    auto s = two_node_scenario();
    EXPECT_NO_THROW(s.validate());
    auto bad = s;
    bad.compromised = bad.sink;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = s;
    bad.nodes[0] = {-1, 0};
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = s;
    bad.sources[0].rate_bps = 0;
    EXPECT_THROW(bad.validate(), ConfigError);
    bad = s;
    bad.channel.num_channels = 0;
    try {
        bad.validate();
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_EQ(e.field(), "channel.num_channels");
    }
}

TEST(ChannelModel, NoisePowerPerChannel) {
    ChannelModel m;
    EXPECT_DOUBLE_EQ(m.noise_power_w(), 1e-8);
    EXPECT_DOUBLE_EQ(m.mean_fading(), 0.5);
}
