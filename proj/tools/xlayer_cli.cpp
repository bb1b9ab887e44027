// Command-line front end: scenario generation, attack-defend simulation,
// detection, ROC and trade-off sweeps, BER table, BER-curve training.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "xlayer/xlayer.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace xlayer;

namespace {

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out = "results";
    std::optional<double> jammer_budget_mw;
    std::optional<int> periods;
    std::string trace;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", c.config, "Experiment config (JSON); defaults apply when omitted")->check(CLI::ExistingFile);
    sub->add_option("--seed", c.seed, "Scenario seed; sweeps run on this seed only");
    sub->add_option("--out", c.out, "Output directory, created if absent")->capture_default_str();
    sub->add_option("--jammer-budget", c.jammer_budget_mw, "Jammer budget in mW; sweeps use this budget only")
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--periods", c.periods, "Attack-defend periods")->check(CLI::PositiveNumber);
}

ExperimentConfig effective_config(const Common& c) {
    ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
    if (c.seed) cfg.seeds = {*c.seed};
    if (c.jammer_budget_mw) {
        const double w = *c.jammer_budget_mw * 1e-3;
        if (w > 0) cfg.jammer_budgets_w = {w};
        cfg.attack_budget_w = w;
    }
    if (c.periods) cfg.periods = *c.periods;
    cfg.validate();
    return cfg;
}

fs::path prepare_out(const Common& c) {
    const fs::path dir(c.out);
    fs::create_directories(dir);
    return dir;
}

std::uint64_t single_seed(const ExperimentConfig& cfg) { return cfg.seeds.front(); }

double single_budget(const ExperimentConfig& cfg) { return cfg.attack_budget_w; }

int cmd_generate(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    write_json(dir / "config.json", to_json(cfg));
    const auto g = generate_scenario(cfg, single_seed(cfg));
    auto j = to_json(g.scenario);
    if (g.planned) j["planned_target"] = {g.planned->victim, g.planned->receiver};
    write_json(dir / ("scenario_" + scenario_name(g.scenario.rng_seed) + ".json"), j);
    std::cout << "scenario " << scenario_name(g.scenario.rng_seed) << ": " << g.scenario.node_count()
              << " nodes, sink " << g.scenario.sink << ", compromised " << g.scenario.compromised << '\n';
    return 0;
}

void write_traffic(std::ostream& os, const IterationResult& run, bool jammed) {
    for (const auto& rec : run.history)
        for (const auto& [link, rate] : rec.traffic.link_rate_bps)
            os << rec.period << ',' << (jammed ? 1 : 0) << ',' << link.first << ',' << link.second << ','
               << fmt_double(rate) << '\n';
}

int cmd_simulate(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    const auto g = generate_scenario(cfg, single_seed(cfg));
    auto scn = g.scenario;
    const auto name = scenario_name(scn.rng_seed);
    write_json(dir / ("scenario_" + name + ".json"), to_json(scn));

    scn.jammer.budget_w = single_budget(cfg);
    scn.jammer.enabled = scn.jammer.budget_w > 0;
    const auto jammed = run_iteration(scn, cfg.periods);
    scn.jammer.enabled = false;
    const auto base = run_iteration(scn, cfg.periods);

    {
        auto os = open_output(dir / "history.jsonl");
        jammed.write_history_jsonl(os);
    }
    {
        auto os = open_output(dir / ("traffic_" + name + ".csv"));
        os << "period,jammed,src,dst,rate_bps\n";
        write_traffic(os, base, false);
        write_traffic(os, jammed, true);
    }
    const std::size_t from = cfg.periods > 1 ? 1 : 0;
    json attack{{"scenario", name},
                {"compromised", g.scenario.compromised},
                {"budget_w", single_budget(cfg)},
                {"periods", cfg.periods},
                {"gain_history_bps", jammed.outcome.gain_history},
                {"baseline_history_bps", base.outcome.gain_history},
                {"mean_gain_bps", jammed.outcome.mean_gain(from)},
                {"mean_baseline_bps", base.outcome.mean_gain(from)}};
    update_summary(dir, "attack", attack);
    std::cout << name << ": compromised node " << g.scenario.compromised << " input rate "
              << jammed.outcome.mean_gain(from) << " bit/s jammed vs " << base.outcome.mean_gain(from)
              << " bit/s without jamming\n";
    return 0;
}

ClassifierConfig proposed_classifier(const ExperimentConfig& cfg) {
    ClassifierConfig cls;
    cls.i_lwr_w = cfg.grid.step_w;
    cls.p_th = cfg.p_th;
    cls.min_channels_flagged = cfg.min_channels_flagged;
    return cls;
}

/// Posteriors from an event trace. Link state per channel comes from the
/// first record on that channel; one batch per period.
int detect_trace(const Common& c, const ExperimentConfig& cfg, const fs::path& dir) {
    std::ifstream in(c.trace);
    if (!in) throw ConfigError("--trace", "cannot open '" + c.trace + "'");
    const auto trace = read_trace_jsonl(in);
    if (trace.empty()) throw ConfigError("--trace", "trace is empty");

    int channels = 0;
    for (const auto& r : trace) channels = std::max(channels, r.channel + 1);
    std::vector<ChannelContext> ctx(static_cast<std::size_t>(channels));
    std::vector<bool> seen(ctx.size(), false);
    const double default_noise = cfg.scenario.channel.noise_power_w();
    for (const auto& r : trace) {
        const auto f = static_cast<std::size_t>(r.channel);
        if (seen[f]) continue;
        seen[f] = true;
        const double noise = r.noise_w.value_or(default_noise);
        double signal;
        if (r.signal_w)
            signal = *r.signal_w;
        else if (r.sinr)
            signal = *r.sinr * noise;
        else
            throw ConfigError("--trace", "record lacks 'signal_w' or 'sinr'");
        ctx[f] = {signal, 1.0, noise};
    }

    std::map<std::uint64_t, std::vector<BitEvent>> by_period;
    for (const auto& r : trace) {
        auto& v = by_period[r.period];
        for (std::uint64_t k = 0; k < r.bits; ++k) v.push_back({k >= r.errors, r.channel, r.period});
    }
    auto it = by_period.begin();
    const BatchSource stream = [&]() -> std::optional<std::vector<BitEvent>> {
        if (it == by_period.end()) return std::nullopt;
        return (it++)->second;
    };
    const auto post = run_detector(ctx, stream, cfg.grid, cfg.ber_model, cfg.convergence);

    DetectionReport rep;
    rep.posteriors = post;
    rep.monitored.resize(ctx.size());
    for (std::size_t f = 0; f < ctx.size(); ++f) rep.monitored[f] = ctx[f].power_w > 0;
    json ch = json::array();
    for (std::size_t f = 0; f < post.size(); ++f) {
        if (!rep.monitored[f]) continue;
        auto os = open_output(dir / ("posterior_trace_" + std::to_string(f) + ".csv"));
        post[f].write_csv(os);
        ch.push_back({{"channel", f}, {"mode_w", post[f].mode_w()}, {"max_mass", post[f].max_mass()}, {"bits", post[f].events}});
    }
    const auto verdict = classify(rep, proposed_classifier(cfg)) == Verdict::attacked ? "attacked" : "not_attacked";
    update_summary(dir, "detection", {{"scenario", "trace"}, {"verdict", verdict}, {"channels", ch}});
    std::cout << "trace: " << post.size() << " channels, verdict " << verdict << '\n';
    return 0;
}

int cmd_detect(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    if (!c.trace.empty()) return detect_trace(c, cfg, dir);

    const auto g = generate_scenario(cfg, single_seed(cfg));
    const double budget = single_budget(cfg);
    const auto ds = DetectorSettings::from(cfg);
    const auto s = detection_sample(g, 0, budget > 0 ? budget : cfg.jammer_budgets_w.front(), budget > 0, ds);
    write_posteriors(dir, s);
    const auto cls = proposed_classifier(cfg);
    auto j = to_json(s, cls);
    const auto pooled = pooled_posterior(s.report.posteriors, s.report.monitored);
    j["link_mode_w"] = pooled.mode_w();
    j["link_max_mass"] = pooled.max_mass();
    {
        auto os = open_output(dir / ("posterior_" + s.scenario + "_link.csv"));
        pooled.write_csv(os);
    }
    update_summary(dir, "detection", j);
    std::cout << s.scenario << ": link " << s.link.victim << "->" << s.link.receiver << ", verdict "
              << j["verdict"].get<std::string>() << ", link posterior mode " << pooled.mode_w() << " W\n";
    return 0;
}

int cmd_roc(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    const auto r = roc_sweep(cfg);
    {
        auto os = open_output(dir / "roc_proposed.csv");
        r.proposed.write_csv(os);
    }
    {
        auto os = open_output(dir / "roc_ber.csv");
        r.ber_baseline.write_csv(os);
    }
    update_summary(dir, "roc", {{"auc_proposed", r.proposed.auc}, {"auc_ber", r.ber_baseline.auc},
                                {"samples", r.samples.size()}, {"seeds", cfg.seeds.size()}});
    std::cout << "AUC proposed " << r.proposed.auc << ", BER threshold " << r.ber_baseline.auc << '\n';
    return 0;
}

int cmd_tradeoff(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    const auto r = tradeoff_study(cfg);
    {
        auto os = open_output(dir / "tradeoff.csv");
        r.write_csv(os);
    }
    json shares = json::array();
    for (const auto& w : cfg.weights) {
        shares.push_back({{"alpha", w.alpha},
                          {"beta", w.beta},
                          {"S_l", r.share(w, StrategyKind::reroute)},
                          {"S_m", r.share(w, StrategyKind::stay)},
                          {"S_SNC", r.share(w, StrategyKind::secure_coding)},
                          {"min_delay", r.min_delay_share(w)}});
        std::cout << "(" << w.alpha << ", " << w.beta << "): SNC share " << r.share(w, StrategyKind::secure_coding)
                  << " over " << r.traces.size() << " traces\n";
    }
    update_summary(dir, "tradeoff", {{"traces", r.traces.size()}, {"skipped", r.skipped}, {"shares", shares}});
    return 0;
}

int cmd_ber_table(const Common& c) {
    const auto cfg = effective_config(c);
    const auto dir = prepare_out(c);
    const auto t = ber_table(cfg, single_seed(cfg));
    {
        auto os = open_output(dir / "ber_table.csv");
        t.write_csv(os);
    }
    json rows = json::array();
    for (const auto& r : t.rows) {
        rows.push_back({{"budget_w", r.budget_w}, {"ber", r.ber}, {"reference_ber", r.reference_ber}, {"bits", r.bits}});
        std::cout << r.budget_w * 1e3 << " mW: BER " << r.ber << " (reference " << r.reference_ber << ")\n";
    }
    update_summary(dir, "ber_table", {{"scenario", t.scenario}, {"link", {t.link.victim, t.link.receiver}}, {"rows", rows}});
    return 0;
}

int cmd_fit_ber(const Common& c) {
    if (c.trace.empty()) throw ConfigError("--trace", "fit-ber needs an event trace");
    std::ifstream in(c.trace);
    if (!in) throw ConfigError("--trace", "cannot open '" + c.trace + "'");
    const auto trace = read_trace_jsonl(in);
    const auto samples = ber_samples_from_trace(trace);
    const auto model = fit_ber_curve(samples);
    const auto dir = prepare_out(c);
    auto j = model.to_json();
    j["samples"] = samples.size();
    write_json(dir / "ber_model.json", j);
    std::cout << "a " << fmt_double(model.a) << "\nb " << fmt_double(model.b) << "\nfloor " << fmt_double(model.floor)
              << "\nrms_residual " << fmt_double(model.rms_residual) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-layer jamming attack/defence simulator"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);

    Common common;
    std::map<std::string, int (*)(const Common&)> handlers{
        {"generate", cmd_generate}, {"simulate", cmd_simulate}, {"detect", cmd_detect},       {"roc", cmd_roc},
        {"tradeoff", cmd_tradeoff}, {"ber-table", cmd_ber_table}, {"fit-ber", cmd_fit_ber}};
    const std::map<std::string, std::string> help{
        {"generate", "Write the effective config and one generated scenario"},
        {"simulate", "Attack-defend iteration with and without jamming"},
        {"detect", "Run the detector on the attacked link (or on --trace events)"},
        {"roc", "ROC sweep: interference-range detector vs BER threshold"},
        {"tradeoff", "Mitigation strategy choice over the (alpha, beta) set"},
        {"ber-table", "Victim-link BER at 0, 10 and 100 mW"},
        {"fit-ber", "Fit a BER-SINR curve to an event trace"}};
    for (const auto& [name, text] : help) {
        auto* sub = app.add_subcommand(name, text);
        add_common(sub, common);
        if (name == "detect" || name == "fit-ber")
            sub->add_option("--trace", common.trace, "Event trace (JSON lines)")->check(CLI::ExistingFile);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto* sub = app.get_subcommands().front();
    try {
        return handlers.at(sub->get_name())(common);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
