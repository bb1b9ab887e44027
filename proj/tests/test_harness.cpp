#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "xlayer/harness.hpp"

using namespace xlayer;

namespace {

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.seeds = {1, 2, 3, 4, 5};
    c.jammer_budgets_w = {0.01, 0.1};
    return c;
}

std::string dump_scenario(const GeneratedScenario& g) { return to_json(g.scenario).dump(); }

}  // namespace

TEST(GenerateScenario, DeterministicPerSeed) {
    ExperimentConfig cfg;
    EXPECT_EQ(dump_scenario(generate_scenario(cfg, 3)), dump_scenario(generate_scenario(cfg, 3)));
    EXPECT_NE(dump_scenario(generate_scenario(cfg, 3)), dump_scenario(generate_scenario(cfg, 4)));
}

TEST(GenerateScenario, RolesAndPlacement) {
    ExperimentConfig cfg;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto g = generate_scenario(cfg, seed);
        const auto& s = g.scenario;
        ASSERT_EQ(s.node_count(), 25);
        EXPECT_EQ(s.sources.size(), 5u);
        for (const auto& src : s.sources) {
            EXPECT_NE(src.node, s.sink);
            EXPECT_NE(src.node, s.compromised);
            EXPECT_EQ(src.rate_bps, 80e3);
        }
        EXPECT_NE(s.compromised, s.sink);
        for (std::size_t a = 0; a < s.nodes.size(); ++a) {
            EXPECT_GE(s.nodes[a].x, 0.0);
            EXPECT_LE(s.nodes[a].x, 500.0);
            EXPECT_GE(s.nodes[a].y, 0.0);
            EXPECT_LE(s.nodes[a].y, 500.0);
            for (std::size_t b = a + 1; b < s.nodes.size(); ++b) EXPECT_GT(distance(s.nodes[a], s.nodes[b]), 1.0);
        }
        EXPECT_GE(s.jammer.position.x, 0.0);
        EXPECT_LE(s.jammer.position.x, 500.0);
        EXPECT_DOUBLE_EQ(s.jammer.budget_w, cfg.attack_budget_w);
        if (g.planned) {
            EXPECT_NEAR(distance(s.jammer.position, s.nodes[static_cast<std::size_t>(g.planned->receiver)]), 40.2, 1e-6);
            EXPECT_NE(g.planned->receiver, s.compromised);
        }
    }
}

TEST(GenerateScenario, QuietRoutesDeliverEverything) {
    ExperimentConfig cfg;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto s = generate_scenario(cfg, seed).scenario;
        const auto tm = traffic_map(update_routes(s, LinkGains::mean_field(s), InterferenceMap(s.node_count(), 10)), s);
        EXPECT_NEAR(tm.delivered_bps, s.total_source_rate(), 1e-6);
    }
}

TEST(GenerateScenario, ScenarioJsonRoundTrip) {
    const auto s = generate_scenario(ExperimentConfig{}, 6).scenario;
    const auto back = scenario_from_json(to_json(s));
    EXPECT_EQ(to_json(back).dump(), to_json(s).dump());
}

TEST(SynthesizeBits, ZeroBerAllCorrect) {
    Rng rng(1);
    const auto ev = synthesize_bits(1e6, 10000, BerModel::analytic(), rng);
    for (const auto& e : ev) ASSERT_TRUE(e.correct);
}

TEST(SynthesizeBits, CoinFlipCounts) {
    Rng rng(2);
    const auto ev = synthesize_bits(0.0, 1'000'000, BerModel::analytic(), rng);
    const auto c = EventCounts::of(ev);
    // 3 sigma of Binomial(1e6, 0.5) is 1500.
    EXPECT_NEAR(static_cast<double>(c.incorrect), 500000.0, 1500.0);
}

TEST(SynthesizeBits, FixedSeedIsReproducible) {
    Rng a(77), b(77);
    const auto x = synthesize_bits(1.0, 5000, BerModel::analytic(), a, 3, 9);
    const auto y = synthesize_bits(1.0, 5000, BerModel::analytic(), b, 3, 9);
    ASSERT_EQ(x.size(), y.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        EXPECT_EQ(x[k].correct, y[k].correct);
        EXPECT_EQ(x[k].channel, 3);
        EXPECT_EQ(x[k].period, 9u);
    }
}

TEST(Roc, AucOfKnownPoints) {
    // (fpr, tpr) path (0,0) (0.5,0.5) (0.5,1) (1,1): a triangle of 0.125 plus a 0.5 strip.
    const std::vector<RocPoint> pts{{0, 0.5, 0.5}, {0, 1.0, 0.5}};
    const double oracle = 0.5 * 0.5 / 2 + 0.5 * 1.0;
    EXPECT_NEAR(roc_auc(pts), oracle, 1e-12);
    EXPECT_NEAR(roc_auc(std::vector<RocPoint>{}), 0.5, 1e-12);
    EXPECT_NEAR(roc_auc(std::vector<RocPoint>{{0, 1.0, 0.0}}), 1.0, 1e-12);
}

TEST(Roc, RandomScoresGiveChanceAuc) {
    Rng rng(5);
    std::vector<bool> labels;
    std::vector<double> score;
    for (int k = 0; k < 400; ++k) {
        labels.push_back(k % 2 == 0);
        score.push_back(rng.uniform(0.0, 1.0));
    }
    std::vector<double> thr;
    for (int k = 0; k <= 100; ++k) thr.push_back(k / 100.0);
    const auto c = roc_curve(thr, labels, [&](std::size_t i, double t) { return score[i] >= t; });
    EXPECT_NEAR(c.auc, 0.5, 0.05);
    EXPECT_THROW(roc_curve(thr, std::vector<bool>(10, true), [](std::size_t, double) { return true; }), ModelError);
}

TEST(Roc, SweepEndpointsAndMonotonicity) {
    const auto cfg = small_config();
    const auto r = roc_sweep(cfg);
    EXPECT_EQ(r.samples.size(), 20u);
    const auto& pts = r.proposed.points;
    ASSERT_FALSE(pts.empty());
    EXPECT_EQ(pts.front().threshold, 0.0);
    EXPECT_EQ(pts.front().tpr, 1.0);
    EXPECT_EQ(pts.front().fpr, 1.0);
    for (std::size_t k = 1; k < pts.size(); ++k) {
        EXPECT_LE(pts[k].tpr, pts[k - 1].tpr);
        EXPECT_LE(pts[k].fpr, pts[k - 1].fpr);
    }
    const auto& ber = r.ber_baseline.points;
    EXPECT_EQ(ber.front().tpr, 1.0);
    EXPECT_EQ(ber.front().fpr, 1.0);
    for (std::size_t k = 1; k < ber.size(); ++k) EXPECT_LE(ber[k].tpr, ber[k - 1].tpr);

    // Above the grid nothing is flagged.
    auto c = cfg;
    c.i_lwr_sweep = {2e-7, 3e-7, 1e-7};
    const auto above = roc_from_samples(r.samples, c);
    for (const auto& p : above.proposed.points) {
        EXPECT_EQ(p.tpr, 0.0);
        EXPECT_EQ(p.fpr, 0.0);
    }
}

TEST(Roc, LabelsAlternateJammedAndCalmOnSameLink) {
    const auto r = roc_sweep(small_config());
    for (std::size_t k = 0; k + 1 < r.samples.size(); k += 2) {
        EXPECT_TRUE(r.samples[k].jammed);
        EXPECT_FALSE(r.samples[k + 1].jammed);
        EXPECT_EQ(r.samples[k].link.receiver, r.samples[k + 1].link.receiver);
        for (double i : r.samples[k + 1].true_interference_w) EXPECT_EQ(i, 0.0);
    }
}

TEST(Config, JsonRoundTrip) {
    ExperimentConfig c;
    c.seeds = {3, 9};
    c.mitigation.risk_max = 0.4;
    c.weights = {{0.2, 0.8}};
    c.scenario.channel.num_channels = 4;
    EXPECT_EQ(config_from_json(to_json(c)), c);
    EXPECT_EQ(config_from_json(to_json(ExperimentConfig{})), ExperimentConfig{});
    EXPECT_EQ(config_from_json(nlohmann::json::object()), ExperimentConfig{});
}

TEST(Config, ErrorsNameTheField) {
    auto field_of = [](const nlohmann::json& j) -> std::string {
        try {
            config_from_json(j).validate();
        } catch (const ConfigError& e) {
            return e.field();
        }
        return "";
    };
    EXPECT_EQ(field_of({{"bogus", 1}}), "bogus");
    EXPECT_EQ(field_of({{"scenario", {{"nodes", 3}}}}), "scenario.nodes");
    EXPECT_EQ(field_of({{"periods", "five"}}), "periods");
    EXPECT_EQ(field_of({{"periods", 0}}), "periods");
    EXPECT_EQ(field_of({{"scenario", {{"node_count", 2}}}}), "scenario.node_count");
    EXPECT_EQ(field_of({{"grid", {{"step_w", -1.0}}}}).rfind("grid.", 0), 0u);
    EXPECT_EQ(field_of(nlohmann::json::array()), "<root>");
}

TEST(Tradeoff, WeightExtremes) {
    auto cfg = small_config();
    const auto r = tradeoff_study(cfg);
    ASSERT_FALSE(r.traces.empty());
    EXPECT_EQ(r.rows.size(), r.traces.size() * cfg.weights.size());
    EXPECT_EQ(r.share({0.0, 1.0}, StrategyKind::secure_coding), 1.0);
    EXPECT_EQ(r.min_delay_share({1.0, 0.0}), 1.0);
    for (const auto& t : r.traces) {
        EXPECT_TRUE(std::isfinite(t.t_l_s));
        EXPECT_TRUE(std::isfinite(t.t_m_s));
        EXPECT_GT(t.message_rate, 0.0);
        EXPECT_NE(t.jammed_hop, t.alternative);
    }
}

TEST(Tradeoff, CsvSchema) {
    const auto r = tradeoff_study(small_config());
    std::ostringstream os;
    r.write_csv(os);
    std::istringstream in(os.str());
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "alpha,beta,h_Sl,h_Sm,h_SNC,chosen");
    std::size_t lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    EXPECT_EQ(lines, r.rows.size());
}

TEST(BerTable, OrderingAndBounds) {
    ExperimentConfig cfg;
    const auto t = ber_table(cfg, 1);
    ASSERT_EQ(t.rows.size(), 3u);
    EXPECT_EQ(t.rows[0].budget_w, 0.0);
    EXPECT_EQ(t.rows[1].budget_w, 0.01);
    EXPECT_EQ(t.rows[2].budget_w, 0.1);
    EXPECT_LT(t.rows[0].ber, t.rows[1].ber);
    EXPECT_LT(t.rows[1].ber, t.rows[2].ber);
    for (const auto& r : t.rows) {
        EXPECT_GT(r.bits, 0u);
        EXPECT_LT(r.ber, 0.15);
    }
}

TEST(AttackEfficacy, ZeroBudgetMatchesBaseline) {
    auto cfg = small_config();
    cfg.periods = 3;
    for (const auto& row : attack_efficacy(cfg, 0.0)) EXPECT_EQ(row.gain_jammed_bps, row.gain_baseline_bps);
}

TEST(Outputs, CsvAreDeterministic) {
    const auto cfg = small_config();
    std::ostringstream a, b;
    roc_sweep(cfg).proposed.write_csv(a);
    roc_sweep(cfg).proposed.write_csv(b);
    EXPECT_EQ(a.str(), b.str());
    std::ostringstream c, d;
    ber_table(cfg, 2).write_csv(c);
    ber_table(cfg, 2).write_csv(d);
    EXPECT_EQ(c.str(), d.str());
}
