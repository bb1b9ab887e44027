#pragma once

// Defender side of the cross-layer protocol: each node jointly picks a power
// allocation (waterfilling) and the next hop that minimizes its expected delay
// to the sink. Network-wide this is a distance-vector fixed point.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "xlayer/errors.hpp"
#include "xlayer/io.hpp"
#include "xlayer/netmodel.hpp"

namespace xlayer {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Maximizes sum_f log2(1 + P^f g^f) subject to sum_f P^f <= budget, P^f >= 0.
/// `effective_gains` are H^f / (I^f + eta).
inline PowerAllocation waterfill(double budget_w, std::span<const double> effective_gains) {
    if (!(budget_w > 0)) throw ModelError("waterfill: budget must be positive");
    std::vector<std::size_t> order;
    for (std::size_t f = 0; f < effective_gains.size(); ++f) {
        if (effective_gains[f] < 0 || std::isnan(effective_gains[f]))
            throw ModelError("waterfill: negative effective gain");
        if (effective_gains[f] > 0) order.push_back(f);
    }
    if (order.empty()) throw ModelError("waterfill: no usable channel (all gains zero)");
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return effective_gains[a] > effective_gains[b]; });

    // Grow the active set strongest-first; the last level that keeps the
    // weakest active channel above its floor is the water level.
    double inv_sum = 0.0;
    double level = 0.0;
    for (std::size_t k = 0; k < order.size(); ++k) {
        const double inv = 1.0 / effective_gains[order[k]];
        const double candidate = (budget_w + inv_sum + inv) / static_cast<double>(k + 1);
        if (k > 0 && candidate <= inv) break;
        inv_sum += inv;
        level = candidate;
    }

    PowerAllocation alloc = PowerAllocation::zero(static_cast<int>(effective_gains.size()), budget_w);
    for (std::size_t f : order) alloc.watts[f] = std::max(0.0, level - 1.0 / effective_gains[f]);
    // Renormalize rounding drift so the budget holds exactly.
    const double total = alloc.total();
    if (total > budget_w)
        for (auto& p : alloc.watts) p *= budget_w / total;
    return alloc;
}

inline std::vector<NodeId> neighbors(const Scenario& scn, NodeId n) {
    std::vector<NodeId> out;
    const auto& pn = scn.nodes[static_cast<std::size_t>(n)];
    for (NodeId m = 0; m < scn.node_count(); ++m)
        if (m != n && distance(pn, scn.nodes[static_cast<std::size_t>(m)]) <= scn.neighbor_radius_m)
            out.push_back(m);
    return out;
}

struct LinkEvaluation {
    PowerAllocation power;
    double throughput_bps = 0.0;
    double delay_s = kInf;  // +inf when the queue is unstable
};

/// Waterfilled allocation and resulting throughput/delay of a link with channel
/// gains `h` and receiver interference `interference_w`, offered `arrival_bps`.
inline LinkEvaluation evaluate_link(const Scenario& scn, std::span<const double> h,
                                    std::span<const double> interference_w, double arrival_bps) {
    const auto& ch = scn.channel;
    std::vector<double> eff(h.size());
    for (std::size_t f = 0; f < h.size(); ++f) eff[f] = h[f] / (interference_w[f] + ch.noise_power_w());

    LinkEvaluation ev;
    if (std::none_of(eff.begin(), eff.end(), [](double g) { return g > 0; })) {
        ev.power = PowerAllocation::zero(ch.num_channels, scn.node_budget_w);
        return ev;
    }
    ev.power = waterfill(scn.node_budget_w, eff);
    ev.throughput_bps = link_throughput(ev.power.watts, h, interference_w, ch);
    ev.delay_s = link_delay(ev.throughput_bps, arrival_bps, ch).value_or(kInf);
    return ev;
}

inline LinkEvaluation evaluate_link(const Scenario& scn, const LinkGains& gains, const InterferenceMap& interference,
                                    NodeId n, NodeId m, double arrival_bps) {
    return evaluate_link(scn, gains.link(n, m), interference.at(m), arrival_bps);
}

struct HopCandidate {
    NodeId neighbor = kNoNode;
    double total_delay_s = kInf;  // link delay + neighbor's delay to sink
};

/// Argmin over candidates, ties to the lowest node id. kNoNode if all infinite.
inline HopCandidate argmin_next_hop(std::span<const HopCandidate> candidates) {
    HopCandidate best;
    for (const auto& c : candidates) {
        if (!std::isfinite(c.total_delay_s)) continue;
        if (best.neighbor == kNoNode || c.total_delay_s < best.total_delay_s ||
            (c.total_delay_s == best.total_delay_s && c.neighbor < best.neighbor))
            best = c;
    }
    return best;
}

struct NeighborDelay {
    NodeId neighbor = kNoNode;
    double delay_to_sink_s = kInf;
};

struct BestStrategy {
    PowerAllocation power;
    NodeId next_hop = kNoNode;  // kNoNode: disconnected
    double expected_delay_s = kInf;
};

/// Per-node optimum: for every neighbor waterfill, add its delay-to-sink, take the argmin.
inline BestStrategy best_strategy(const Scenario& scn, const LinkGains& gains, const InterferenceMap& interference,
                                  NodeId node, std::span<const NeighborDelay> neighbor_delays, double arrival_bps) {
    if (neighbor_delays.empty()) throw ModelError("best_strategy: empty neighbor set");
    std::vector<HopCandidate> cands;
    std::vector<LinkEvaluation> evals;
    for (const auto& nd : neighbor_delays) {
        evals.push_back(evaluate_link(scn, gains, interference, node, nd.neighbor, arrival_bps));
        cands.push_back({nd.neighbor, evals.back().delay_s + nd.delay_to_sink_s});
    }
    const auto best = argmin_next_hop(cands);
    BestStrategy out;
    out.power = PowerAllocation::zero(scn.channel.num_channels, scn.node_budget_w);
    if (best.neighbor == kNoNode) return out;
    for (std::size_t k = 0; k < cands.size(); ++k)
        if (cands[k].neighbor == best.neighbor) out.power = evals[k].power;
    out.next_hop = best.neighbor;
    out.expected_delay_s = best.total_delay_s;
    return out;
}

/// Dense per-link delay table (seconds). +inf for non-neighbors and unstable links.
class DelayTable {
public:
    DelayTable() = default;
    explicit DelayTable(int nodes) : n_(nodes), d_(static_cast<std::size_t>(nodes * nodes), kInf) {}

    double operator()(NodeId from, NodeId to) const { return d_[idx(from, to)]; }
    double& operator()(NodeId from, NodeId to) { return d_[idx(from, to)]; }
    int size() const { return n_; }

    friend bool operator==(const DelayTable&, const DelayTable&) = default;

private:
    std::size_t idx(NodeId a, NodeId b) const { return static_cast<std::size_t>(a * n_ + b); }
    int n_ = 0;
    std::vector<double> d_;
};

struct DefenderStrategy {
    std::vector<NodeId> next_hop;           // kNoNode for the sink and disconnected nodes
    std::vector<PowerAllocation> power;     // allocation on the chosen link
    std::vector<double> delay_to_sink_s;    // T_n
    std::vector<double> arrival_bps;        // offered load used for link delays
    DelayTable link_delays;                 // per-link delays the routes were computed on
    int rounds = 0;
    bool converged = false;

    bool connected(NodeId n) const { return std::isfinite(delay_to_sink_s[static_cast<std::size_t>(n)]); }

    friend bool operator==(const DefenderStrategy&, const DefenderStrategy&) = default;
};

struct TrafficMap {
    std::map<std::pair<NodeId, NodeId>, double> link_rate_bps;
    std::vector<double> input_rate_bps;  // sum of incoming link rates
    double delivered_bps = 0.0;

    double link_rate(NodeId a, NodeId b) const {
        auto it = link_rate_bps.find({a, b});
        return it == link_rate_bps.end() ? 0.0 : it->second;
    }

    void write_csv(std::ostream& os) const {
        os << "src,dst,rate_bps\n";
        for (const auto& [link, rate] : link_rate_bps)
            os << link.first << ',' << link.second << ',' << fmt_double(rate) << '\n';
    }

    friend bool operator==(const TrafficMap&, const TrafficMap&) = default;
};

/// Propagates every source's rate along next hops to the sink.
inline TrafficMap traffic_map(const std::vector<NodeId>& next_hop, const Scenario& scn) {
    const int n = scn.node_count();
    TrafficMap tm;
    tm.input_rate_bps.assign(static_cast<std::size_t>(n), 0.0);
    for (const auto& src : scn.sources) {
        NodeId at = src.node;
        int hops = 0;
        while (at != scn.sink) {
            const NodeId nxt = next_hop[static_cast<std::size_t>(at)];
            if (nxt == kNoNode) break;  // disconnected: excluded from the map
            if (++hops > n) throw ModelError("traffic_map: routing cycle detected");
            tm.link_rate_bps[{at, nxt}] += src.rate_bps;
            tm.input_rate_bps[static_cast<std::size_t>(nxt)] += src.rate_bps;
            at = nxt;
        }
        if (at == scn.sink) tm.delivered_bps += src.rate_bps;
    }
    return tm;
}

inline TrafficMap traffic_map(const DefenderStrategy& s, const Scenario& scn) { return traffic_map(s.next_hop, scn); }

namespace detail {

// Bellman-Ford over fixed link delays toward the sink; synchronous rounds,
// ties to the lowest neighbor id.
inline void relax_to_sink(const Scenario& scn, const DelayTable& delays, std::vector<NodeId>& next,
                          std::vector<double>& dist) {
    const int n = scn.node_count();
    dist.assign(static_cast<std::size_t>(n), kInf);
    next.assign(static_cast<std::size_t>(n), kNoNode);
    dist[static_cast<std::size_t>(scn.sink)] = 0.0;
    std::vector<std::vector<NodeId>> nbrs(static_cast<std::size_t>(n));
    for (NodeId a = 0; a < n; ++a) nbrs[static_cast<std::size_t>(a)] = neighbors(scn, a);
    for (int round = 0; round < n; ++round) {
        std::vector<double> nd = dist;
        std::vector<NodeId> nn = next;
        for (NodeId a = 0; a < n; ++a) {
            if (a == scn.sink) continue;
            std::vector<HopCandidate> cands;
            for (NodeId b : nbrs[static_cast<std::size_t>(a)])
                cands.push_back({b, delays(a, b) + dist[static_cast<std::size_t>(b)]});
            const auto best = argmin_next_hop(cands);
            nd[static_cast<std::size_t>(a)] = best.total_delay_s;
            nn[static_cast<std::size_t>(a)] = best.neighbor;
        }
        const bool stable = nd == dist && nn == next;
        dist = std::move(nd);
        next = std::move(nn);
        if (stable) break;
    }
}

}  // namespace detail

/// Network-wide strategy: per-link delays from the current offered load, a
/// delay-metric distance-vector relaxation from the sink, then the offered load
/// is moved toward the traffic the new routes carry. Repeats until next hops
/// are stable or |N| rounds have run.
inline DefenderStrategy update_routes(const Scenario& scn, const LinkGains& gains, const InterferenceMap& interference) {
    const int n = scn.node_count();
    DefenderStrategy s;
    s.arrival_bps.resize(static_cast<std::size_t>(n));
    for (NodeId a = 0; a < n; ++a) s.arrival_bps[static_cast<std::size_t>(a)] = scn.generation_rate(a);

    std::vector<std::vector<NodeId>> nbrs(static_cast<std::size_t>(n));
    for (NodeId a = 0; a < n; ++a) nbrs[static_cast<std::size_t>(a)] = neighbors(scn, a);

    std::vector<NodeId> prev;
    std::vector<std::vector<LinkEvaluation>> evals(static_cast<std::size_t>(n));
    for (int round = 1; round <= n; ++round) {
        s.rounds = round;
        s.link_delays = DelayTable(n);
        for (NodeId a = 0; a < n; ++a) {
            auto& row = evals[static_cast<std::size_t>(a)];
            row.clear();
            if (a == scn.sink) continue;
            for (NodeId b : nbrs[static_cast<std::size_t>(a)]) {
                row.push_back(evaluate_link(scn, gains, interference, a, b, s.arrival_bps[static_cast<std::size_t>(a)]));
                s.link_delays(a, b) = row.back().delay_s;
            }
        }
        detail::relax_to_sink(scn, s.link_delays, s.next_hop, s.delay_to_sink_s);
        if (s.next_hop == prev) {
            s.converged = true;
            break;
        }
        if (round == n) break;
        prev = s.next_hop;
        // Successive averages: the inflow used next round is the mean of the
        // inflows produced so far, which damps route flapping between links.
        const auto tm = traffic_map(s.next_hop, scn);
        const double w = 1.0 / static_cast<double>(round);
        for (NodeId a = 0; a < n; ++a) {
            const auto k = static_cast<std::size_t>(a);
            const double inflow = s.arrival_bps[k] - scn.generation_rate(a);
            s.arrival_bps[k] = scn.generation_rate(a) + inflow + w * (tm.input_rate_bps[k] - inflow);
        }
    }

    s.power.assign(static_cast<std::size_t>(n), PowerAllocation::zero(scn.channel.num_channels, scn.node_budget_w));
    for (NodeId a = 0; a < n; ++a) {
        const NodeId hop = s.next_hop[static_cast<std::size_t>(a)];
        if (hop == kNoNode) continue;
        const auto& nb = nbrs[static_cast<std::size_t>(a)];
        const auto k = static_cast<std::size_t>(std::find(nb.begin(), nb.end(), hop) - nb.begin());
        s.power[static_cast<std::size_t>(a)] = evals[static_cast<std::size_t>(a)][k].power;
    }
    return s;
}

/// True when following next hops from `from` reaches `target` (inclusive).
inline bool route_passes(const std::vector<NodeId>& next_hop, NodeId from, NodeId target) {
    NodeId at = from;
    for (std::size_t guard = 0; guard <= next_hop.size(); ++guard) {
        if (at == target) return true;
        if (at == kNoNode) return false;
        at = next_hop[static_cast<std::size_t>(at)];
    }
    return false;
}

}  // namespace xlayer
