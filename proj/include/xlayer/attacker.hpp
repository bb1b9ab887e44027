#pragma once

// Hammer-and-anvil attacker: a low-power jammer degrades a link that does not
// lead to the compromised node so that the victim's delay-optimal reroute sends
// its traffic through the compromised node.

#include <cmath>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "json.hpp"

#include "xlayer/defender.hpp"
#include "xlayer/netmodel.hpp"

namespace xlayer {

struct TargetLink {
    NodeId victim = kNoNode;       // n
    NodeId receiver = kNoNode;     // m, current next hop of n
    NodeId alternative = kNoNode;  // l, neighbor whose route reaches the compromised node
    double flip_power_w = 0.0;     // least total jamming power that makes l the argmin

    friend bool operator==(const TargetLink&, const TargetLink&) = default;
};

struct AttackerStrategy {
    PowerAllocation jammer;
    std::optional<TargetLink> target;

    friend bool operator==(const AttackerStrategy&, const AttackerStrategy&) = default;
};

/// Uniform spread of the whole budget over every channel.
inline PowerAllocation jam_allocation(double budget_w, int channels) {
    if (budget_w < 0) throw ModelError("jam_allocation: negative budget");
    PowerAllocation a = PowerAllocation::zero(channels, budget_w);
    for (auto& p : a.watts) p = budget_w / channels;
    return a;
}

namespace detail {

// Delay of n -> m when the jammer adds `jam_total_w` (uniform) on top of `base`.
inline double jammed_link_delay(const Scenario& scn, const LinkGains& gains, std::span<const double> base_interference,
                                NodeId n, NodeId m, double arrival_bps, double jam_total_w) {
    const auto hj = gains.jammer_link(m);
    std::vector<double> interference(base_interference.begin(), base_interference.end());
    const double per_channel = jam_total_w / scn.channel.num_channels;
    for (std::size_t f = 0; f < interference.size(); ++f) interference[f] += per_channel * hj[f];
    return evaluate_link(scn, gains.link(n, m), interference, arrival_bps).delay_s;
}

}  // namespace detail

/// Least total jamming power (<= budget) on link n -> m such that
/// T_n(m) > `alternative_delay_s`. Empty if the budget cannot flip it.
inline std::optional<double> min_flip_power(const Scenario& scn, const LinkGains& gains,
                                            const InterferenceMap& base_interference, const DefenderStrategy& state,
                                            NodeId n, NodeId m, double alternative_delay_s, double budget_w) {
    const double arrival = state.arrival_bps[static_cast<std::size_t>(n)];
    const double tail = state.delay_to_sink_s[static_cast<std::size_t>(m)];
    const auto flips = [&](double p) {
        return detail::jammed_link_delay(scn, gains, base_interference.at(m), n, m, arrival, p) + tail >
               alternative_delay_s;
    };
    if (flips(0.0)) return 0.0;
    if (!(budget_w > 0) || !flips(budget_w)) return std::nullopt;
    double lo = 0.0;
    double hi = budget_w;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (flips(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Among traffic-carrying nodes whose route avoids the compromised node, the
/// one whose current link needs the least jamming power before a neighbor that
/// leads to the compromised node becomes its delay-optimal next hop.
inline std::optional<TargetLink> select_target(const Scenario& scn, const LinkGains& gains,
                                               const InterferenceMap& base_interference, const DefenderStrategy& state,
                                               double budget_w) {
    const NodeId c = scn.compromised;
    std::optional<TargetLink> best;
    for (NodeId n = 0; n < scn.node_count(); ++n) {
        if (n == scn.sink || n == c) continue;
        const NodeId m = state.next_hop[static_cast<std::size_t>(n)];
        if (m == kNoNode || state.arrival_bps[static_cast<std::size_t>(n)] <= 0) continue;
        if (route_passes(state.next_hop, n, c)) continue;
        for (NodeId l : neighbors(scn, n)) {
            if (l == m || !state.connected(l)) continue;
            if (!route_passes(state.next_hop, l, c) || route_passes(state.next_hop, l, n)) continue;
            const double alt = state.link_delays(n, l) + state.delay_to_sink_s[static_cast<std::size_t>(l)];
            if (!std::isfinite(alt)) continue;
            const auto p = min_flip_power(scn, gains, base_interference, state, n, m, alt, budget_w);
            if (!p) continue;
            if (!best || *p < best->flip_power_w) best = TargetLink{n, m, l, *p};
        }
    }
    return best;
}

struct PeriodRecord {
    std::uint64_t period = 0;
    DefenderStrategy strategy;  // S_i, the response to the previous jamming
    TrafficMap traffic;
    AttackerStrategy attacker;  // A_i, chosen after S_i
    double attack_gain_bps = 0.0;

    nlohmann::json history_line() const {
        nlohmann::json j;
        j["period"] = period;
        if (attacker.target)
            j["target_link"] = {attacker.target->victim, attacker.target->receiver};
        else
            j["target_link"] = nullptr;
        j["P_j"] = attacker.jammer.watts;
        j["attack_gain"] = attack_gain_bps;
        return j;
    }
};

struct AttackOutcome {
    double attack_gain_bps = 0.0;  // input rate of the compromised node in the last period
    int periods_elapsed = 0;
    std::vector<double> gain_history;

    double mean_gain(std::size_t from_period = 0) const {
        if (from_period >= gain_history.size()) return 0.0;
        double s = 0.0;
        for (std::size_t i = from_period; i < gain_history.size(); ++i) s += gain_history[i];
        return s / static_cast<double>(gain_history.size() - from_period);
    }
};

struct IterationResult {
    std::vector<PeriodRecord> history;
    AttackOutcome outcome;

    void write_history_jsonl(std::ostream& os) const {
        for (const auto& r : history) os << r.history_line().dump() << '\n';
    }
};

/// Attack-defend iteration. Each period: fresh fading; the defender re-solves
/// its routes against the jamming of the previous period; the attacker then
/// revises its strategy, but only once the defender it targets has moved.
inline IterationResult run_iteration(const Scenario& scn, int periods) {
    if (periods < 1) throw ModelError("run_iteration: periods must be >= 1");
    const int channels = scn.channel.num_channels;
    IterationResult res;
    AttackerStrategy attacker{PowerAllocation::zero(channels, scn.jammer.budget_w), std::nullopt};
    NodeId last_target_hop = kNoNode;

    for (int i = 0; i < periods; ++i) {
        PeriodRecord rec;
        rec.period = static_cast<std::uint64_t>(i);
        const auto gains = LinkGains::draw(scn, rec.period);
        rec.strategy = update_routes(scn, gains, interference_map(attacker.jammer, gains));
        rec.traffic = traffic_map(rec.strategy, scn);
        rec.attack_gain_bps = rec.traffic.input_rate_bps[static_cast<std::size_t>(scn.compromised)];

        if (scn.jammer.enabled && scn.jammer.budget_w > 0) {
            const bool target_moved =
                !attacker.target ||
                rec.strategy.next_hop[static_cast<std::size_t>(attacker.target->victim)] != last_target_hop;
            if (target_moved) {
                const InterferenceMap quiet(scn.node_count(), channels);
                if (auto t = select_target(scn, gains, quiet, rec.strategy, scn.jammer.budget_w)) {
                    attacker.target = t;
                    attacker.jammer = jam_allocation(scn.jammer.budget_w, channels);
                }
                // No new victim: a running attack is held, an idle one stays idle.
            }
            if (attacker.target)
                last_target_hop = rec.strategy.next_hop[static_cast<std::size_t>(attacker.target->victim)];
        }
        rec.attacker = attacker;
        res.outcome.gain_history.push_back(rec.attack_gain_bps);
        res.history.push_back(std::move(rec));
    }
    res.outcome.periods_elapsed = periods;
    res.outcome.attack_gain_bps = res.outcome.gain_history.back();
    return res;
}

}  // namespace xlayer
