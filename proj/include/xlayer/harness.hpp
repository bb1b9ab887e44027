#pragma once

// Experiment orchestration: seeded scenario generation, synthetic bit events,
// detection samples, ROC sweeps, the mitigation trade-off study and the BER
// table. Every output is a pure function of (ExperimentConfig, seeds).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"

#include "xlayer/attacker.hpp"
#include "xlayer/defender.hpp"
#include "xlayer/detection.hpp"
#include "xlayer/errors.hpp"
#include "xlayer/io.hpp"
#include "xlayer/mitigation.hpp"
#include "xlayer/netmodel.hpp"
#include "xlayer/rng.hpp"

namespace xlayer {

inline constexpr const char* kVersion = "1.0.0";


// ---------------------------------------------------------------------------
// Configuration

struct ScenarioDefaults {
    int node_count = 25;
    double area_m = 500.0;
    int source_count = 5;
    double source_rate_bps = 80'000.0;
    double node_budget_w = 1.0;
    double neighbor_radius_m = 150.0;
    double jammer_distance_m = 40.2;  // jammer to target receiver
    double min_separation_m = 1.0;
    int max_placement_attempts = 1000;
    bool require_delivery = true;  // reject placements whose quiet routes drop traffic
    ChannelModel channel;

    friend bool operator==(const ScenarioDefaults&, const ScenarioDefaults&) = default;
};

struct Sweep {
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    std::vector<double> values() const {
        std::vector<double> v;
        const auto n = static_cast<std::size_t>(std::llround((stop - start) / step));
        for (std::size_t k = 0; k <= n; ++k) v.push_back(start + static_cast<double>(k) * step);
        return v;
    }

    friend bool operator==(const Sweep&, const Sweep&) = default;
};

struct WeightPair {
    double alpha = 0.0;
    double beta = 0.0;

    friend bool operator==(const WeightPair&, const WeightPair&) = default;
};

struct ExperimentConfig {
    ScenarioDefaults scenario;
    std::vector<double> jammer_budgets_w{0.01, 0.02, 0.03, 0.04, 0.05, 0.06, 0.07, 0.08, 0.09, 0.10};
    double attack_budget_w = 0.01;  // budget used by simulate/detect/efficacy runs
    int periods = 5;
    std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14, 15, 16, 17, 18, 19, 20};

    InterferenceGrid grid;
    std::uint64_t bits_per_period = 10'000;  // per monitored channel
    std::uint64_t batch_bits = 1'000;        // bits per transmission batch, per channel
    Convergence convergence;
    BerModel ber_model;

    Sweep i_lwr_sweep{0.0, 1e-7, 1e-9};
    Sweep ber_sweep{0.0, 0.5, 0.001};
    double p_th = 0.5;
    int min_channels_flagged = 1;

    std::vector<WeightPair> weights{{1.0, 0.0}, {0.0, 1.0}, {0.5, 0.5}};
    MitigationParams mitigation;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
        return a.scenario == b.scenario && a.jammer_budgets_w == b.jammer_budgets_w &&
               a.attack_budget_w == b.attack_budget_w && a.periods == b.periods && a.seeds == b.seeds &&
               a.grid == b.grid && a.bits_per_period == b.bits_per_period && a.batch_bits == b.batch_bits &&
               a.convergence.target_mass == b.convergence.target_mass &&
               a.convergence.max_events == b.convergence.max_events &&
               a.ber_model.to_json() == b.ber_model.to_json() && a.i_lwr_sweep == b.i_lwr_sweep &&
               a.ber_sweep == b.ber_sweep && a.p_th == b.p_th && a.min_channels_flagged == b.min_channels_flagged &&
               a.weights == b.weights && a.mitigation.alpha == b.mitigation.alpha &&
               a.mitigation.beta == b.mitigation.beta && a.mitigation.epsilon == b.mitigation.epsilon &&
               a.mitigation.utility_min == b.mitigation.utility_min && a.mitigation.risk_max == b.mitigation.risk_max &&
               a.mitigation.snc_search_limit == b.mitigation.snc_search_limit;
    }

    void validate() const {
        const auto& s = scenario;
        s.channel.validate();
        if (s.node_count < 3) throw ConfigError("scenario.node_count", "must be >= 3");
        if (!(s.area_m > 0)) throw ConfigError("scenario.area_m", "must be > 0");
        if (s.source_count < 1 || s.source_count > s.node_count - 2)
            throw ConfigError("scenario.source_count", "must be in [1, node_count - 2]");
        if (!(s.source_rate_bps > 0)) throw ConfigError("scenario.source_rate_bps", "must be > 0");
        if (!(s.node_budget_w > 0)) throw ConfigError("scenario.node_budget_w", "must be > 0");
        if (!(s.neighbor_radius_m > 0)) throw ConfigError("scenario.neighbor_radius_m", "must be > 0");
        if (!(s.jammer_distance_m > 0)) throw ConfigError("scenario.jammer_distance_m", "must be > 0");
        if (s.min_separation_m < 0) throw ConfigError("scenario.min_separation_m", "must be >= 0");
        if (s.max_placement_attempts < 1) throw ConfigError("scenario.max_placement_attempts", "must be >= 1");
        if (jammer_budgets_w.empty()) throw ConfigError("jammer_budgets_w", "must not be empty");
        for (double b : jammer_budgets_w)
            if (!(b > 0)) throw ConfigError("jammer_budgets_w", "entries must be > 0");
        if (attack_budget_w < 0) throw ConfigError("attack_budget_w", "must be >= 0");
        if (periods < 1) throw ConfigError("periods", "must be >= 1");
        if (seeds.empty()) throw ConfigError("seeds", "must not be empty");
        grid.validate();
        if (bits_per_period < 1) throw ConfigError("bits_per_period", "must be >= 1");
        if (batch_bits < 1) throw ConfigError("batch_bits", "must be >= 1");
        if (!(convergence.target_mass > 0 && convergence.target_mass <= 1))
            throw ConfigError("convergence.target_mass", "must lie in (0, 1]");
        if (convergence.max_events < 1) throw ConfigError("convergence.max_events", "must be >= 1");
        if (!(i_lwr_sweep.step > 0)) throw ConfigError("i_lwr_sweep.step", "must be > 0");
        if (i_lwr_sweep.stop < i_lwr_sweep.start) throw ConfigError("i_lwr_sweep.stop", "must be >= start");
        if (!(ber_sweep.step > 0)) throw ConfigError("ber_sweep.step", "must be > 0");
        if (ber_sweep.stop < ber_sweep.start) throw ConfigError("ber_sweep.stop", "must be >= start");
        if (p_th < 0 || p_th > 1) throw ConfigError("p_th", "must lie in [0, 1]");
        if (min_channels_flagged < 1) throw ConfigError("min_channels_flagged", "must be >= 1");
        if (weights.empty()) throw ConfigError("weights", "must not be empty");
        for (const auto& w : weights) {
            if (w.alpha < 0 || w.beta < 0 || !(w.alpha + w.beta > 0))
                throw ConfigError("weights", "alpha, beta must be >= 0 with a positive sum");
        }
        mitigation.validate();
    }
};

namespace detail {

template <class T>
void read_opt(const nlohmann::json& j, const char* key, T& out, const std::string& path) {
    if (!j.contains(key)) return;
    try {
        out = j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(path + key, std::string("wrong type: ") + e.what());
    }
}

inline void require_object(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected a JSON object");
}

inline void reject_unknown(const nlohmann::json& j, std::initializer_list<const char*> known, const std::string& path) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (std::none_of(known.begin(), known.end(), [&](const char* k) { return it.key() == k; }))
            throw ConfigError(path + it.key(), "unknown key");
    }
}

}  // namespace detail

inline nlohmann::json to_json(const ChannelModel& c) {
    return {{"num_channels", c.num_channels},
            {"bandwidth_hz", c.bandwidth_hz},
            {"path_loss_exponent", c.path_loss_exponent},
            {"rayleigh_sigma", c.rayleigh_sigma},
            {"noise_psd_w_per_hz", c.noise_psd_w_per_hz},
            {"packet_size_bits", c.packet_size_bits}};
}

inline ChannelModel channel_from_json(const nlohmann::json& j, const std::string& path) {
    detail::require_object(j, path);
    detail::reject_unknown(j, {"num_channels", "bandwidth_hz", "path_loss_exponent", "rayleigh_sigma",
                               "noise_psd_w_per_hz", "packet_size_bits"},
                           path + ".");
    ChannelModel c;
    const std::string p = path + ".";
    detail::read_opt(j, "num_channels", c.num_channels, p);
    detail::read_opt(j, "bandwidth_hz", c.bandwidth_hz, p);
    detail::read_opt(j, "path_loss_exponent", c.path_loss_exponent, p);
    detail::read_opt(j, "rayleigh_sigma", c.rayleigh_sigma, p);
    detail::read_opt(j, "noise_psd_w_per_hz", c.noise_psd_w_per_hz, p);
    detail::read_opt(j, "packet_size_bits", c.packet_size_bits, p);
    return c;
}

inline nlohmann::json to_json(const ExperimentConfig& c) {
    nlohmann::json j;
    const auto& s = c.scenario;
    j["scenario"] = {{"node_count", s.node_count},
                     {"area_m", s.area_m},
                     {"source_count", s.source_count},
                     {"source_rate_bps", s.source_rate_bps},
                     {"node_budget_w", s.node_budget_w},
                     {"neighbor_radius_m", s.neighbor_radius_m},
                     {"jammer_distance_m", s.jammer_distance_m},
                     {"min_separation_m", s.min_separation_m},
                     {"max_placement_attempts", s.max_placement_attempts},
                     {"require_delivery", s.require_delivery},
                     {"channel", to_json(s.channel)}};
    j["jammer_budgets_w"] = c.jammer_budgets_w;
    j["attack_budget_w"] = c.attack_budget_w;
    j["periods"] = c.periods;
    j["seeds"] = c.seeds;
    j["grid"] = {{"min_w", c.grid.min_w}, {"max_w", c.grid.max_w}, {"step_w", c.grid.step_w}};
    j["detector"] = {{"bits_per_period", c.bits_per_period},
                     {"batch_bits", c.batch_bits},
                     {"target_mass", c.convergence.target_mass},
                     {"max_events", c.convergence.max_events},
                     {"ber_model", c.ber_model.to_json()}};
    j["roc"] = {{"i_lwr_w", {{"start", c.i_lwr_sweep.start}, {"stop", c.i_lwr_sweep.stop}, {"step", c.i_lwr_sweep.step}}},
                {"ber_th", {{"start", c.ber_sweep.start}, {"stop", c.ber_sweep.stop}, {"step", c.ber_sweep.step}}},
                {"p_th", c.p_th},
                {"min_channels_flagged", c.min_channels_flagged}};
    nlohmann::json w = nlohmann::json::array();
    for (const auto& p : c.weights) w.push_back({{"alpha", p.alpha}, {"beta", p.beta}});
    j["mitigation"] = {{"weights", w},
                       {"epsilon", c.mitigation.epsilon},
                       {"snc_search_limit", c.mitigation.snc_search_limit},
                       {"utility_min", c.mitigation.utility_min ? nlohmann::json(*c.mitigation.utility_min) : nlohmann::json(nullptr)},
                       {"risk_max", c.mitigation.risk_max ? nlohmann::json(*c.mitigation.risk_max) : nlohmann::json(nullptr)}};
    return j;
}

namespace detail {

inline Sweep sweep_from_json(const nlohmann::json& j, const std::string& path, Sweep s) {
    require_object(j, path);
    reject_unknown(j, {"start", "stop", "step"}, path + ".");
    read_opt(j, "start", s.start, path + ".");
    read_opt(j, "stop", s.stop, path + ".");
    read_opt(j, "step", s.step, path + ".");
    return s;
}

inline std::optional<double> opt_number(const nlohmann::json& j, const char* key, const std::string& path,
                                        std::optional<double> dflt) {
    if (!j.contains(key)) return dflt;
    if (j.at(key).is_null()) return std::nullopt;
    if (!j.at(key).is_number()) throw ConfigError(path + key, "expected a number or null");
    return j.at(key).get<double>();
}

}  // namespace detail

/// Parses a (possibly partial) config; missing keys keep their defaults.
/// Unknown keys and ill-typed values raise ConfigError naming the field.
inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    using detail::read_opt;
    detail::require_object(j, "");
    detail::reject_unknown(j, {"scenario", "jammer_budgets_w", "attack_budget_w", "periods", "seeds", "grid", "detector",
                               "roc", "mitigation"},
                           "");
    ExperimentConfig c;
    if (j.contains("scenario")) {
        const auto& s = j["scenario"];
        detail::require_object(s, "scenario");
        detail::reject_unknown(s, {"node_count", "area_m", "source_count", "source_rate_bps", "node_budget_w",
                                   "neighbor_radius_m", "jammer_distance_m", "min_separation_m",
                                   "max_placement_attempts", "require_delivery", "channel"},
                               "scenario.");
        auto& d = c.scenario;
        read_opt(s, "node_count", d.node_count, "scenario.");
        read_opt(s, "area_m", d.area_m, "scenario.");
        read_opt(s, "source_count", d.source_count, "scenario.");
        read_opt(s, "source_rate_bps", d.source_rate_bps, "scenario.");
        read_opt(s, "node_budget_w", d.node_budget_w, "scenario.");
        read_opt(s, "neighbor_radius_m", d.neighbor_radius_m, "scenario.");
        read_opt(s, "jammer_distance_m", d.jammer_distance_m, "scenario.");
        read_opt(s, "min_separation_m", d.min_separation_m, "scenario.");
        read_opt(s, "max_placement_attempts", d.max_placement_attempts, "scenario.");
        read_opt(s, "require_delivery", d.require_delivery, "scenario.");
        if (s.contains("channel")) d.channel = channel_from_json(s["channel"], "scenario.channel");
    }
    read_opt(j, "jammer_budgets_w", c.jammer_budgets_w, "");
    read_opt(j, "attack_budget_w", c.attack_budget_w, "");
    read_opt(j, "periods", c.periods, "");
    read_opt(j, "seeds", c.seeds, "");
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        detail::require_object(g, "grid");
        detail::reject_unknown(g, {"min_w", "max_w", "step_w"}, "grid.");
        read_opt(g, "min_w", c.grid.min_w, "grid.");
        read_opt(g, "max_w", c.grid.max_w, "grid.");
        read_opt(g, "step_w", c.grid.step_w, "grid.");
    }
    if (j.contains("detector")) {
        const auto& d = j["detector"];
        detail::require_object(d, "detector");
        detail::reject_unknown(d, {"bits_per_period", "batch_bits", "target_mass", "max_events", "ber_model"}, "detector.");
        read_opt(d, "bits_per_period", c.bits_per_period, "detector.");
        read_opt(d, "batch_bits", c.batch_bits, "detector.");
        read_opt(d, "target_mass", c.convergence.target_mass, "detector.");
        read_opt(d, "max_events", c.convergence.max_events, "detector.");
        if (d.contains("ber_model")) {
            try {
                c.ber_model = BerModel::from_json(d["ber_model"]);
            } catch (const ConfigError& e) {
                throw ConfigError("detector.ber_model." + e.field(), e.what());
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("detector.ber_model", e.what());
            }
        }
    }
    if (j.contains("roc")) {
        const auto& r = j["roc"];
        detail::require_object(r, "roc");
        detail::reject_unknown(r, {"i_lwr_w", "ber_th", "p_th", "min_channels_flagged"}, "roc.");
        if (r.contains("i_lwr_w")) c.i_lwr_sweep = detail::sweep_from_json(r["i_lwr_w"], "roc.i_lwr_w", c.i_lwr_sweep);
        if (r.contains("ber_th")) c.ber_sweep = detail::sweep_from_json(r["ber_th"], "roc.ber_th", c.ber_sweep);
        read_opt(r, "p_th", c.p_th, "roc.");
        read_opt(r, "min_channels_flagged", c.min_channels_flagged, "roc.");
    }
    if (j.contains("mitigation")) {
        const auto& m = j["mitigation"];
        detail::require_object(m, "mitigation");
        detail::reject_unknown(m, {"weights", "epsilon", "snc_search_limit", "utility_min", "risk_max"}, "mitigation.");
        if (m.contains("weights")) {
            if (!m["weights"].is_array()) throw ConfigError("mitigation.weights", "expected an array");
            c.weights.clear();
            for (std::size_t k = 0; k < m["weights"].size(); ++k) {
                const auto& w = m["weights"][k];
                const std::string p = "mitigation.weights[" + std::to_string(k) + "].";
                detail::require_object(w, p);
                WeightPair wp;
                read_opt(w, "alpha", wp.alpha, p);
                read_opt(w, "beta", wp.beta, p);
                c.weights.push_back(wp);
            }
        }
        read_opt(m, "epsilon", c.mitigation.epsilon, "mitigation.");
        read_opt(m, "snc_search_limit", c.mitigation.snc_search_limit, "mitigation.");
        c.mitigation.utility_min = detail::opt_number(m, "utility_min", "mitigation.", c.mitigation.utility_min);
        c.mitigation.risk_max = detail::opt_number(m, "risk_max", "mitigation.", c.mitigation.risk_max);
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::filesystem::path& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(read_text(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string(), e.what());
    }
    return config_from_json(j);
}

// ---------------------------------------------------------------------------
// Scenario documents

inline nlohmann::json to_json(const Scenario& s) {
    nlohmann::json nodes = nlohmann::json::array();
    for (std::size_t k = 0; k < s.nodes.size(); ++k) nodes.push_back({{"id", k}, {"x", s.nodes[k].x}, {"y", s.nodes[k].y}});
    nlohmann::json sources = nlohmann::json::array();
    for (const auto& src : s.sources) sources.push_back({{"node", src.node}, {"rate_bps", src.rate_bps}});
    return {{"area_m", s.area_m},
            {"nodes", nodes},
            {"sink", s.sink},
            {"sources", sources},
            {"compromised", s.compromised},
            {"jammer", {{"x", s.jammer.position.x}, {"y", s.jammer.position.y}, {"budget_w", s.jammer.budget_w}, {"enabled", s.jammer.enabled}}},
            {"channel", to_json(s.channel)},
            {"node_budget_w", s.node_budget_w},
            {"neighbor_radius_m", s.neighbor_radius_m},
            {"rng_seed", s.rng_seed}};
}

inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::read_opt;
    detail::require_object(j, "");
    auto need = [&](const char* key) -> const nlohmann::json& {
        if (!j.contains(key)) throw ConfigError(key, "missing");
        return j.at(key);
    };
    Scenario s;
    read_opt(j, "area_m", s.area_m, "");
    const auto& nodes = need("nodes");
    if (!nodes.is_array()) throw ConfigError("nodes", "expected an array");
    s.nodes.resize(nodes.size());
    std::vector<bool> seen(nodes.size(), false);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const std::string p = "nodes[" + std::to_string(k) + "].";
        const auto& n = nodes[k];
        detail::require_object(n, p);
        std::size_t id = k;
        read_opt(n, "id", id, p);
        if (id >= nodes.size() || seen[id]) throw ConfigError(p + "id", "ids must be a permutation of 0..N-1");
        seen[id] = true;
        if (!n.contains("x") || !n.contains("y")) throw ConfigError(p + "x", "position missing");
        read_opt(n, "x", s.nodes[id].x, p);
        read_opt(n, "y", s.nodes[id].y, p);
    }
    need("sink");
    read_opt(j, "sink", s.sink, "");
    need("compromised");
    read_opt(j, "compromised", s.compromised, "");
    const auto& sources = need("sources");
    if (!sources.is_array()) throw ConfigError("sources", "expected an array");
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const std::string p = "sources[" + std::to_string(k) + "].";
        Source src;
        read_opt(sources[k], "node", src.node, p);
        read_opt(sources[k], "rate_bps", src.rate_bps, p);
        s.sources.push_back(src);
    }
    if (j.contains("jammer")) {
        const auto& jm = j["jammer"];
        detail::require_object(jm, "jammer");
        read_opt(jm, "x", s.jammer.position.x, "jammer.");
        read_opt(jm, "y", s.jammer.position.y, "jammer.");
        read_opt(jm, "budget_w", s.jammer.budget_w, "jammer.");
        read_opt(jm, "enabled", s.jammer.enabled, "jammer.");
    }
    if (j.contains("channel")) s.channel = channel_from_json(j["channel"], "channel");
    read_opt(j, "node_budget_w", s.node_budget_w, "");
    read_opt(j, "neighbor_radius_m", s.neighbor_radius_m, "");
    read_opt(j, "rng_seed", s.rng_seed, "");
    s.validate();
    return s;
}

// ---------------------------------------------------------------------------
// Scenario generation

struct GeneratedScenario {
    Scenario scenario;
    std::optional<TargetLink> planned;  // victim link the jammer was placed for
};

namespace detail {

inline bool disk_connected(const std::vector<Position>& nodes, double radius) {
    std::vector<bool> seen(nodes.size(), false);
    std::vector<std::size_t> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const auto a = stack.back();
        stack.pop_back();
        for (std::size_t b = 0; b < nodes.size(); ++b)
            if (!seen[b] && distance(nodes[a], nodes[b]) <= radius) {
                seen[b] = true;
                ++count;
                stack.push_back(b);
            }
    }
    return count == nodes.size();
}

// Gains with every jammer->node link replaced by the mean-fading value at
// `jammer_distance`, used to rank candidate targets before the jammer exists.
inline LinkGains with_hypothetical_jammer(LinkGains g, const ChannelModel& ch, double jammer_distance) {
    const double h = path_gain(jammer_distance, ch.mean_fading(), ch);
    for (NodeId m = 0; m < g.node_count(); ++m)
        for (auto& v : g.jammer_link(m)) v = h;
    return g;
}

// Point at `radius` from `center` inside the area, as far as possible from all nodes.
inline Position place_near(Position center, double radius, const std::vector<Position>& nodes, double area) {
    constexpr int kAngles = 72;
    Position best = center;
    double best_clear = -1.0;
    for (int k = 0; k < kAngles; ++k) {
        const double th = 2.0 * std::numbers::pi * k / kAngles;
        const Position p{center.x + radius * std::cos(th), center.y + radius * std::sin(th)};
        if (p.x < 0 || p.y < 0 || p.x > area || p.y > area) continue;
        double clear = std::numeric_limits<double>::infinity();
        for (const auto& q : nodes) clear = std::min(clear, distance(p, q));
        if (clear > best_clear) {
            best_clear = clear;
            best = p;
        }
    }
    if (best_clear < 0) {  // whole circle outside the area: clamp
        best = {std::clamp(center.x + radius, 0.0, area), std::clamp(center.y, 0.0, area)};
    }
    return best;
}

}  // namespace detail

/// Uniform placement with rejection until the disk graph is connected, no two
/// nodes are closer than the minimum separation and the undisturbed routes on the
/// mean-fading network deliver every source's traffic. Sources are the
/// smallest-x nodes, the sink the largest-x node. The compromised node is the
/// random relay with an attackable link; the jammer sits at
/// `jammer_distance_m` from the receiver of the victim link planned for it.
inline GeneratedScenario generate_scenario(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto& d = cfg.scenario;
    Scenario s;
    s.area_m = d.area_m;
    s.channel = d.channel;
    s.node_budget_w = d.node_budget_w;
    s.neighbor_radius_m = d.neighbor_radius_m;
    s.rng_seed = seed;

    bool placed = false;
    for (int attempt = 0; attempt < d.max_placement_attempts && !placed; ++attempt) {
        Rng rng(seed, {static_cast<std::uint64_t>(Stream::placement), static_cast<std::uint64_t>(attempt)});
        s.nodes.assign(static_cast<std::size_t>(d.node_count), {});
        for (auto& p : s.nodes) p = {rng.uniform(0.0, d.area_m), rng.uniform(0.0, d.area_m)};
        bool spaced = true;
        for (std::size_t a = 0; a < s.nodes.size() && spaced; ++a)
            for (std::size_t b = a + 1; b < s.nodes.size() && spaced; ++b)
                spaced = distance(s.nodes[a], s.nodes[b]) > d.min_separation_m;
        if (!spaced || !detail::disk_connected(s.nodes, d.neighbor_radius_m)) continue;

        std::vector<NodeId> by_x(s.nodes.size());
        std::iota(by_x.begin(), by_x.end(), 0);
        std::stable_sort(by_x.begin(), by_x.end(), [&](NodeId a, NodeId b) {
            return s.nodes[static_cast<std::size_t>(a)].x < s.nodes[static_cast<std::size_t>(b)].x;
        });
        s.sources.clear();
        for (int k = 0; k < d.source_count; ++k) s.sources.push_back({by_x[static_cast<std::size_t>(k)], d.source_rate_bps});
        s.sink = by_x.back();
        if (!d.require_delivery) {
            placed = true;
            break;
        }
        const InterferenceMap quiet(s.node_count(), s.channel.num_channels);
        const auto tm = traffic_map(update_routes(s, LinkGains::mean_field(s), quiet), s);
        placed = tm.delivered_bps >= s.total_source_rate();
    }
    if (!placed)
        throw ModelError("generate_scenario: no connected, deliverable placement after " +
                         std::to_string(d.max_placement_attempts) + " attempts");

    std::vector<NodeId> relays;
    for (NodeId n = 0; n < s.node_count(); ++n)
        if (n != s.sink && s.generation_rate(n) == 0.0) relays.push_back(n);

    // The compromised node is a random relay that has a link worth attacking on
    // large-scale (mean-fading) gains; the jammer goes next to that link's receiver.
    const auto plan_gains = LinkGains::mean_field(s);
    const auto hyp = detail::with_hypothetical_jammer(plan_gains, s.channel, d.jammer_distance_m);
    const InterferenceMap quiet(s.node_count(), s.channel.num_channels);
    const auto routes = update_routes(s, plan_gains, quiet);
    const double budget = cfg.attack_budget_w > 0 ? cfg.attack_budget_w : cfg.jammer_budgets_w.front();

    struct Plan {
        NodeId c;
        TargetLink target;
    };
    std::vector<Plan> plans;
    for (NodeId c : relays) {
        s.compromised = c;
        if (const auto t = select_target(s, hyp, quiet, routes, budget)) plans.push_back({c, *t});
    }

    GeneratedScenario out;
    Rng pick(seed, {static_cast<std::uint64_t>(Stream::compromise)});
    if (!plans.empty()) {
        const auto& chosen = plans[static_cast<std::size_t>(pick.below(plans.size()))];
        s.compromised = chosen.c;
        out.planned = chosen.target;
        s.jammer.position = detail::place_near(s.nodes[static_cast<std::size_t>(chosen.target.receiver)],
                                               d.jammer_distance_m, s.nodes, d.area_m);
    } else {
        s.compromised = relays[static_cast<std::size_t>(pick.below(relays.size()))];
        s.jammer.position = detail::place_near(s.nodes[static_cast<std::size_t>(s.compromised)], d.jammer_distance_m,
                                               s.nodes, d.area_m);
    }
    s.jammer.budget_w = cfg.attack_budget_w;
    s.jammer.enabled = cfg.attack_budget_w > 0;
    s.validate();
    out.scenario = std::move(s);
    return out;
}

// ---------------------------------------------------------------------------
// Bit events and detection samples

/// Independent bit outcomes, each wrong with probability ber(gamma).
inline std::vector<BitEvent> synthesize_bits(double gamma, std::uint64_t k, const BerModel& model, Rng& rng,
                                             int channel = 0, std::uint64_t period = 0) {
    const double p = ber(gamma, model);
    std::vector<BitEvent> out(k);
    for (auto& e : out) e = {!rng.bernoulli(p), channel, period};
    return out;
}

/// Multi-channel variant: `k` bits on each channel whose gamma is given.
inline std::vector<BitEvent> synthesize_bits(std::span<const double> gamma, std::uint64_t k, const BerModel& model,
                                             Rng& rng, std::uint64_t period = 0) {
    std::vector<BitEvent> out;
    out.reserve(k * gamma.size());
    for (std::size_t f = 0; f < gamma.size(); ++f) {
        auto part = synthesize_bits(gamma[f], k, model, rng, static_cast<int>(f), period);
        out.insert(out.end(), part.begin(), part.end());
    }
    return out;
}

enum class JammerFading { realized, mean };

struct LinkUnderTest {
    NodeId victim = kNoNode;
    NodeId receiver = kNoNode;
    NodeId alternative = kNoNode;
    bool from_attacker = false;  // chosen by the attacker in this period, else the planned link
};

struct DetectionSample {
    std::string scenario;
    std::uint64_t seed = 0;
    std::uint64_t period = 0;
    double budget_w = 0.0;
    bool jammed = false;  // ground truth label
    LinkUnderTest link;
    std::vector<ChannelContext> channels;
    std::vector<double> true_interference_w;
    DetectionReport report;
};

/// The link the attacker goes after in this period: its own choice on the
/// undisturbed routes, else the link it was placed for.
inline std::optional<LinkUnderTest> attacked_link(const GeneratedScenario& g, const LinkGains& gains,
                                                  const DefenderStrategy& quiet_routes, double budget_w) {
    const InterferenceMap quiet(g.scenario.node_count(), g.scenario.channel.num_channels);
    if (budget_w > 0)
        if (auto t = select_target(g.scenario, gains, quiet, quiet_routes, budget_w))
            return LinkUnderTest{t->victim, t->receiver, t->alternative, true};
    if (g.planned) return LinkUnderTest{g.planned->victim, g.planned->receiver, g.planned->alternative, false};
    return std::nullopt;
}

struct DetectorSettings {
    InterferenceGrid grid;
    std::uint64_t bits_per_period = 10'000;
    std::uint64_t batch_bits = 1'000;
    Convergence convergence;
    BerModel ber_model;

    static DetectorSettings from(const ExperimentConfig& c) {
        return {c.grid, c.bits_per_period, c.batch_bits, c.convergence, c.ber_model};
    }
};

/// Runs the receiver-side detector on link n -> m. The sender's allocation is
/// its waterfilled response to the interference it last planned for (none);
/// bits are then drawn at the true SINR under `interference_w`.
inline DetectionReport detect_on_link(const Scenario& scn, const LinkGains& gains, NodeId n, NodeId m,
                                      double arrival_bps, std::span<const double> interference_w,
                                      const DetectorSettings& ds, Rng& rng, std::vector<ChannelContext>* ctx_out = nullptr) {
    const int channels = scn.channel.num_channels;
    const std::vector<double> zero(static_cast<std::size_t>(channels), 0.0);
    const auto ev = evaluate_link(scn, gains.link(n, m), zero, arrival_bps);
    const auto h = gains.link(n, m);
    const double eta = scn.channel.noise_power_w();

    std::vector<ChannelContext> ctx(static_cast<std::size_t>(channels));
    std::vector<double> gamma_true(ctx.size());
    for (std::size_t f = 0; f < ctx.size(); ++f) {
        ctx[f] = {ev.power.watts[f], h[f], eta};
        gamma_true[f] = ctx[f].sinr(interference_w[f]);
    }

    DetectionReport rep;
    rep.noise_w = eta;
    rep.monitored.resize(ctx.size());
    for (std::size_t f = 0; f < ctx.size(); ++f) rep.monitored[f] = ctx[f].power_w > 0;

    std::uint64_t sent = 0;
    const BatchSource stream = [&]() -> std::optional<std::vector<BitEvent>> {
        if (sent >= ds.bits_per_period) return std::nullopt;
        const auto k = std::min(ds.batch_bits, ds.bits_per_period - sent);
        sent += k;
        std::vector<BitEvent> batch;
        for (std::size_t f = 0; f < ctx.size(); ++f) {
            if (!rep.monitored[f]) continue;
            auto part = synthesize_bits(gamma_true[f], k, ds.ber_model, rng, static_cast<int>(f));
            for (const auto& e : part) {
                ++rep.bits;
                if (!e.correct) ++rep.bit_errors;
            }
            batch.insert(batch.end(), part.begin(), part.end());
        }
        return batch;
    };
    rep.posteriors = run_detector(ctx, stream, ds.grid, ds.ber_model, ds.convergence);
    if (ctx_out) *ctx_out = std::move(ctx);
    return rep;
}

inline std::string scenario_name(std::uint64_t seed) { return "seed" + std::to_string(seed); }

/// One labelled observation of the attacked link. With the jammer on it emits
/// its whole budget uniformly; with it off the receiver sees noise only.
inline DetectionSample detection_sample(const GeneratedScenario& g, std::uint64_t period, double budget_w, bool jammed,
                                        const DetectorSettings& ds, JammerFading fading = JammerFading::realized,
                                        std::optional<LinkUnderTest> forced_link = std::nullopt) {
    const auto& scn = g.scenario;
    const auto gains = LinkGains::draw(scn, period);
    const int channels = scn.channel.num_channels;
    const InterferenceMap quiet(scn.node_count(), channels);
    const auto routes = update_routes(scn, gains, quiet);

    DetectionSample s;
    s.scenario = scenario_name(scn.rng_seed);
    s.seed = scn.rng_seed;
    s.period = period;
    s.budget_w = budget_w;
    s.jammed = jammed;
    auto link = forced_link ? forced_link : attacked_link(g, gains, routes, budget_w);
    if (!link) throw ModelError("detection_sample: scenario " + s.scenario + " has no attackable link");
    s.link = *link;

    const NodeId m = s.link.receiver;
    s.true_interference_w.assign(static_cast<std::size_t>(channels), 0.0);
    if (jammed) {
        const auto alloc = jam_allocation(budget_w, channels);
        const double mean_gain = path_gain(distance(scn.jammer.position, scn.nodes[static_cast<std::size_t>(m)]),
                                           scn.channel.mean_fading(), scn.channel);
        for (int f = 0; f < channels; ++f) {
            const auto fi = static_cast<std::size_t>(f);
            const double hj = fading == JammerFading::mean ? mean_gain : gains.jammer_link(m)[fi];
            s.true_interference_w[fi] = alloc.watts[fi] * hj;
        }
    }
    // Bits for a sample depend only on its identity, never on evaluation order.
    const auto budget_key = static_cast<std::uint64_t>(std::llround(budget_w * 1e9));
    Rng rng(scn.rng_seed, {static_cast<std::uint64_t>(Stream::bits), period, budget_key, jammed ? 1u : 0u});
    s.report = detect_on_link(scn, gains, s.link.victim, m, routes.arrival_bps[static_cast<std::size_t>(s.link.victim)],
                              s.true_interference_w, ds, rng, &s.channels);
    return s;
}

// ---------------------------------------------------------------------------
// ROC

struct RocPoint {
    double threshold = 0.0;
    double tpr = 0.0;
    double fpr = 0.0;
};

struct RocCurve {
    std::vector<RocPoint> points;  // in sweep order
    double auc = 0.0;

    void write_csv(std::ostream& os) const {
        os << "threshold,tpr,fpr\n";
        for (const auto& p : points) os << fmt_double(p.threshold) << ',' << fmt_double(p.tpr) << ',' << fmt_double(p.fpr) << '\n';
    }
};

/// Trapezoidal area under (FPR, TPR), anchored at (0,0) and (1,1).
inline double roc_auc(std::span<const RocPoint> pts) {
    std::vector<std::pair<double, double>> xy{{0.0, 0.0}, {1.0, 1.0}};
    for (const auto& p : pts) xy.emplace_back(p.fpr, p.tpr);
    std::sort(xy.begin(), xy.end());
    double area = 0.0;
    for (std::size_t k = 1; k < xy.size(); ++k)
        area += (xy[k].first - xy[k - 1].first) * 0.5 * (xy[k].second + xy[k - 1].second);
    return area;
}

/// Generic threshold sweep: `flag(i, thr)` says whether sample i is called attacked.
inline RocCurve roc_curve(std::span<const double> thresholds, const std::vector<bool>& labels,
                          const std::function<bool(std::size_t, double)>& flag) {
    const auto pos = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true));
    const auto neg = labels.size() - pos;
    if (pos == 0 || neg == 0) throw ModelError("roc: both classes are required");
    RocCurve c;
    for (double thr : thresholds) {
        std::size_t tp = 0, fp = 0;
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (flag(i, thr)) (labels[i] ? tp : fp) += 1;
        c.points.push_back({thr, static_cast<double>(tp) / static_cast<double>(pos),
                            static_cast<double>(fp) / static_cast<double>(neg)});
    }
    c.auc = roc_auc(c.points);
    return c;
}

struct RocResult {
    RocCurve proposed;
    RocCurve ber_baseline;
    std::vector<DetectionSample> samples;
};

inline RocResult roc_from_samples(std::vector<DetectionSample> samples, const ExperimentConfig& cfg) {
    std::vector<bool> labels;
    for (const auto& s : samples) labels.push_back(s.jammed);
    const auto lwr = cfg.i_lwr_sweep.values();
    const auto bth = cfg.ber_sweep.values();

    ClassifierConfig range;
    range.variant = ClassifierConfig::Variant::interference_range;
    range.p_th = cfg.p_th;
    range.min_channels_flagged = cfg.min_channels_flagged;
    ClassifierConfig bercls;
    bercls.variant = ClassifierConfig::Variant::ber_threshold;

    RocResult r;
    r.proposed = roc_curve(lwr, labels, [&](std::size_t i, double thr) {
        auto c = range;
        c.i_lwr_w = thr;
        return classify(samples[i].report, c) == Verdict::attacked;
    });
    r.ber_baseline = roc_curve(bth, labels, [&](std::size_t i, double thr) {
        auto c = bercls;
        c.ber_th = thr;
        return classify(samples[i].report, c) == Verdict::attacked;
    });
    r.samples = std::move(samples);
    return r;
}

/// One jammed and one unjammed observation per (seed, budget); the budget's
/// index in the sweep doubles as the period so fading differs across budgets.
inline RocResult roc_sweep(const ExperimentConfig& cfg) {
    cfg.validate();
    const auto ds = DetectorSettings::from(cfg);
    std::vector<DetectionSample> samples;
    for (auto seed : cfg.seeds) {
        const auto g = generate_scenario(cfg, seed);
        for (std::size_t b = 0; b < cfg.jammer_budgets_w.size(); ++b) {
            const double budget = cfg.jammer_budgets_w[b];
            auto jam = detection_sample(g, b, budget, true, ds);
            auto calm = detection_sample(g, b, budget, false, ds, JammerFading::realized, jam.link);
            samples.push_back(std::move(jam));
            samples.push_back(std::move(calm));
        }
    }
    if (samples.size() < 20) throw ModelError("roc_sweep: need at least 10 jammed and 10 unjammed samples");
    return roc_from_samples(std::move(samples), cfg);
}

// ---------------------------------------------------------------------------
// Mitigation trade-off

struct JammedTrace {
    std::string scenario;
    double budget_w = 0.0;
    NodeId victim = kNoNode;
    NodeId jammed_hop = kNoNode;    // m
    NodeId alternative = kNoNode;   // l
    double t_l_s = 0.0;
    double t_m_s = 0.0;
    double message_rate = 0.0;      // packets/s offered at the victim
};

/// Path delays seen by the victim once its link to m is jammed: via l on the
/// undisturbed network, via m with the jamming present.
inline std::optional<JammedTrace> jammed_trace(const GeneratedScenario& g, std::uint64_t period, double budget_w) {
    const auto& scn = g.scenario;
    const auto gains = LinkGains::draw(scn, period);
    const int channels = scn.channel.num_channels;
    const InterferenceMap quiet(scn.node_count(), channels);
    const auto routes = update_routes(scn, gains, quiet);
    const auto link = attacked_link(g, gains, routes, budget_w);
    if (!link || link->alternative == kNoNode) return std::nullopt;
    const NodeId n = link->victim, m = link->receiver, l = link->alternative;
    const double arrival = routes.arrival_bps[static_cast<std::size_t>(n)];
    const auto jam = interference_map(jam_allocation(budget_w, channels), gains);

    JammedTrace t;
    t.scenario = scenario_name(scn.rng_seed);
    t.budget_w = budget_w;
    t.victim = n;
    t.jammed_hop = m;
    t.alternative = l;
    t.t_l_s = evaluate_link(scn, gains, quiet, n, l, arrival).delay_s + routes.delay_to_sink_s[static_cast<std::size_t>(l)];
    t.t_m_s = evaluate_link(scn, gains, jam, n, m, arrival).delay_s + routes.delay_to_sink_s[static_cast<std::size_t>(m)];
    t.message_rate = arrival / scn.channel.packet_size_bits;
    if (!std::isfinite(t.t_l_s) || !std::isfinite(t.t_m_s) || !(t.message_rate > 0)) return std::nullopt;
    return t;
}

struct TradeoffRow {
    WeightPair weights;
    std::size_t trace = 0;
    MitigationChoice choice;
};

struct TradeoffResult {
    std::vector<JammedTrace> traces;
    std::vector<TradeoffRow> rows;
    std::size_t skipped = 0;  // (seed, budget) pairs without a finite jammed trace

    /// Fraction of traces on which `kind` was chosen under `w`.
    double share(const WeightPair& w, StrategyKind kind) const {
        std::size_t hit = 0, total = 0;
        for (const auto& r : rows)
            if (r.weights == w) {
                ++total;
                if (r.choice.best().kind == kind) ++hit;
            }
        return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
    }

    /// Fraction of traces on which the least-delay candidate was chosen under `w`.
    double min_delay_share(const WeightPair& w) const {
        std::size_t hit = 0, total = 0;
        for (const auto& r : rows)
            if (r.weights == w) {
                ++total;
                double t_min = std::numeric_limits<double>::infinity();
                for (const auto& c : r.choice.candidates) t_min = std::min(t_min, c.delay_s);
                if (r.choice.best().delay_s == t_min) ++hit;
            }
        return total ? static_cast<double>(hit) / static_cast<double>(total) : 0.0;
    }

    void write_csv(std::ostream& os) const {
        os << "alpha,beta,h_Sl,h_Sm,h_SNC,chosen\n";
        for (const auto& r : rows) {
            const auto& c = r.choice.candidates;
            os << fmt_double(r.weights.alpha) << ',' << fmt_double(r.weights.beta) << ',' << fmt_double(c[0].h) << ','
               << fmt_double(c[1].h) << ',' << fmt_double(c[2].h) << ',' << to_string(r.choice.best().kind) << '\n';
        }
    }
};

inline TradeoffResult tradeoff_from_traces(std::vector<JammedTrace> traces, const ExperimentConfig& cfg) {
    if (traces.empty()) throw ModelError("tradeoff_study: no jammed traces");
    TradeoffResult r;
    r.traces = std::move(traces);
    for (const auto& w : cfg.weights) {
        auto p = cfg.mitigation;
        p.alpha = w.alpha;
        p.beta = w.beta;
        for (std::size_t k = 0; k < r.traces.size(); ++k) {
            const auto& t = r.traces[k];
            r.rows.push_back({w, k, choose_strategy(t.t_l_s, t.t_m_s, t.message_rate, p)});
        }
    }
    return r;
}

inline TradeoffResult tradeoff_study(const ExperimentConfig& cfg) {
    cfg.validate();
    std::vector<JammedTrace> traces;
    std::size_t skipped = 0;
    for (auto seed : cfg.seeds) {
        const auto g = generate_scenario(cfg, seed);
        for (std::size_t b = 0; b < cfg.jammer_budgets_w.size(); ++b) {
            if (auto t = jammed_trace(g, b, cfg.jammer_budgets_w[b]))
                traces.push_back(*t);
            else
                ++skipped;
        }
    }
    auto r = tradeoff_from_traces(std::move(traces), cfg);
    r.skipped = skipped;
    return r;
}

// ---------------------------------------------------------------------------
// BER table

struct BerTableRow {
    double budget_w = 0.0;
    double reference_ber = 0.0;  // reference value for comparison
    double ber = 0.0;            // empirical, monitored channels of the victim link
    std::uint64_t bits = 0;
};

struct BerTable {
    std::string scenario;
    LinkUnderTest link;
    std::vector<BerTableRow> rows;

    void write_csv(std::ostream& os) const {
        os << "budget_w,ber,reference_ber,bits\n";
        for (const auto& r : rows)
            os << fmt_double(r.budget_w) << ',' << fmt_double(r.ber) << ',' << fmt_double(r.reference_ber) << ',' << r.bits << '\n';
    }
};

/// Victim-link BER at 0, 10 and 100 mW on one scenario. The victim is the
/// attacker's choice at `attack_budget_w` in period 0 and is held fixed.
inline BerTable ber_table(const ExperimentConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const auto g = generate_scenario(cfg, seed);
    const auto ds = DetectorSettings::from(cfg);
    const double pick_budget = cfg.attack_budget_w > 0 ? cfg.attack_budget_w : 0.01;
    const auto anchor = detection_sample(g, 0, pick_budget, true, ds);
    BerTable t;
    t.scenario = anchor.scenario;
    t.link = anchor.link;
    const std::array<std::pair<double, double>, 3> rows{{{0.0, 0.0384}, {0.01, 0.0984}, {0.1, 0.0978}}};
    for (const auto& [budget, ref] : rows) {
        const auto s = detection_sample(g, 0, budget, budget > 0, ds, JammerFading::realized, t.link);
        t.rows.push_back({budget, ref, s.report.empirical_ber(), s.report.bits});
    }
    return t;
}

// ---------------------------------------------------------------------------
// Attack efficacy

struct EfficacyRow {
    std::uint64_t seed = 0;
    double gain_jammed_bps = 0.0;    // mean over periods after the first
    double gain_baseline_bps = 0.0;
};

inline std::vector<EfficacyRow> attack_efficacy(const ExperimentConfig& cfg, double budget_w) {
    cfg.validate();
    std::vector<EfficacyRow> out;
    for (auto seed : cfg.seeds) {
        auto g = generate_scenario(cfg, seed);
        auto scn = g.scenario;
        scn.jammer.budget_w = budget_w;
        scn.jammer.enabled = budget_w > 0;
        const auto jammed = run_iteration(scn, cfg.periods);
        scn.jammer.enabled = false;
        const auto base = run_iteration(scn, cfg.periods);
        const std::size_t from = cfg.periods > 1 ? 1 : 0;
        out.push_back({seed, jammed.outcome.mean_gain(from), base.outcome.mean_gain(from)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output helpers

inline void write_json(const std::filesystem::path& p, const nlohmann::json& j) {
    auto os = open_output(p);
    os << j.dump(2) << '\n';
}

/// Read-modify-write of summary.json so that each command owns its sections.
inline void update_summary(const std::filesystem::path& dir, const std::string& key, const nlohmann::json& value) {
    const auto p = dir / "summary.json";
    nlohmann::json j = nlohmann::json::object();
    if (std::filesystem::exists(p)) {
        try {
            j = nlohmann::json::parse(read_text(p));
        } catch (const nlohmann::json::parse_error&) {
            j = nlohmann::json::object();
        }
        if (!j.is_object()) j = nlohmann::json::object();
    }
    j["version"] = kVersion;
    j[key] = value;
    write_json(p, j);
}

inline void write_posteriors(const std::filesystem::path& dir, const DetectionSample& s) {
    for (std::size_t f = 0; f < s.report.posteriors.size(); ++f) {
        if (!s.report.monitored[f]) continue;
        auto os = open_output(dir / ("posterior_" + s.scenario + "_" + std::to_string(f) + ".csv"));
        s.report.posteriors[f].write_csv(os);
    }
}

inline nlohmann::json to_json(const DetectionSample& s, const ClassifierConfig& cls) {
    nlohmann::json ch = nlohmann::json::array();
    for (std::size_t f = 0; f < s.report.posteriors.size(); ++f) {
        const auto& p = s.report.posteriors[f];
        ch.push_back({{"channel", f},
                      {"monitored", static_cast<bool>(s.report.monitored[f])},
                      {"power_w", s.channels[f].power_w},
                      {"true_interference_w", s.true_interference_w[f]},
                      {"mode_w", p.mode_w()},
                      {"max_mass", p.max_mass()},
                      {"bits", p.events}});
    }
    return {{"scenario", s.scenario},
            {"period", s.period},
            {"budget_w", s.budget_w},
            {"jammed", s.jammed},
            {"link", {s.link.victim, s.link.receiver}},
            {"empirical_ber", s.report.empirical_ber()},
            {"verdict", classify(s.report, cls) == Verdict::attacked ? "attacked" : "not_attacked"},
            {"channels", ch}};
}

}  // namespace xlayer
