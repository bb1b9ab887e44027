#pragma once

// Physical and link-layer model: geometry, path loss, block Rayleigh fading,
// per-channel SINR, Shannon throughput and single-server queueing delay.

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "xlayer/errors.hpp"
#include "xlayer/rng.hpp"

namespace xlayer {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

struct Position {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Position&, const Position&) = default;
};

inline double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

struct ChannelModel {
    int num_channels = 10;
    double bandwidth_hz = 1.0e4;
    double path_loss_exponent = 3.0;
    double rayleigh_sigma = 0.5;
    double noise_psd_w_per_hz = 1.0e-12;
    double packet_size_bits = 1000.0;

    /// Noise power per channel (eta), watts.
    double noise_power_w() const { return noise_psd_w_per_hz * bandwidth_hz; }

    /// Mean of the exponential power fading, 2 sigma^2.
    double mean_fading() const { return 2.0 * rayleigh_sigma * rayleigh_sigma; }

    void validate() const {
        if (num_channels < 1) throw ConfigError("channel.num_channels", "must be >= 1");
        if (!(bandwidth_hz > 0)) throw ConfigError("channel.bandwidth_hz", "must be > 0");
        if (!(path_loss_exponent > 0)) throw ConfigError("channel.path_loss_exponent", "must be > 0");
        if (!(rayleigh_sigma > 0)) throw ConfigError("channel.rayleigh_sigma", "must be > 0");
        if (!(noise_psd_w_per_hz > 0)) throw ConfigError("channel.noise_psd_w_per_hz", "must be > 0");
        if (!(packet_size_bits > 0)) throw ConfigError("channel.packet_size_bits", "must be > 0");
    }

    friend bool operator==(const ChannelModel&, const ChannelModel&) = default;
};

struct Source {
    NodeId node = kNoNode;
    double rate_bps = 0.0;

    friend bool operator==(const Source&, const Source&) = default;
};

struct Jammer {
    Position position;
    double budget_w = 0.0;
    bool enabled = false;

    friend bool operator==(const Jammer&, const Jammer&) = default;
};

/// The simulated world. Node ids are the indices into `nodes`.
struct Scenario {
    double area_m = 500.0;
    std::vector<Position> nodes;
    NodeId sink = kNoNode;
    std::vector<Source> sources;
    NodeId compromised = kNoNode;  // ground truth; defender logic never reads it
    Jammer jammer;
    ChannelModel channel;
    double node_budget_w = 1.0;
    double neighbor_radius_m = 150.0;
    std::uint64_t rng_seed = 0;

    int node_count() const { return static_cast<int>(nodes.size()); }

    bool valid_node(NodeId n) const { return n >= 0 && n < node_count(); }

    /// Traffic generated locally at `n`, bit/s.
    double generation_rate(NodeId n) const {
        double r = 0.0;
        for (const auto& s : sources)
            if (s.node == n) r += s.rate_bps;
        return r;
    }

    double total_source_rate() const {
        return std::accumulate(sources.begin(), sources.end(), 0.0,
                               [](double acc, const Source& s) { return acc + s.rate_bps; });
    }

    void validate() const {
        channel.validate();
        if (!(area_m > 0)) throw ConfigError("area_m", "must be > 0");
        if (nodes.size() < 2) throw ConfigError("nodes", "need at least two nodes");
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const auto& p = nodes[i];
            if (p.x < 0 || p.y < 0 || p.x > area_m || p.y > area_m)
                throw ConfigError("nodes[" + std::to_string(i) + "]", "position outside the area");
        }
        if (!valid_node(sink)) throw ConfigError("sink", "not a valid node id");
        if (!valid_node(compromised)) throw ConfigError("compromised", "not a valid node id");
        if (compromised == sink) throw ConfigError("compromised", "must differ from the sink");
        if (sources.empty()) throw ConfigError("sources", "at least one source required");
        for (std::size_t i = 0; i < sources.size(); ++i) {
            const auto& s = sources[i];
            if (!valid_node(s.node)) throw ConfigError("sources[" + std::to_string(i) + "].node", "invalid id");
            if (!(s.rate_bps > 0)) throw ConfigError("sources[" + std::to_string(i) + "].rate_bps", "must be > 0");
        }
        if (!(node_budget_w > 0)) throw ConfigError("node_budget_w", "must be > 0");
        if (!(neighbor_radius_m > 0)) throw ConfigError("neighbor_radius_m", "must be > 0");
        if (jammer.budget_w < 0) throw ConfigError("jammer.budget_w", "must be >= 0");
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Power gain of a link: fading * d^-exponent. Co-located endpoints are rejected.
inline double path_gain(double distance_m, double fading, const ChannelModel& model) {
    if (!(distance_m > 0)) throw ModelError("path_gain: distance must be positive (co-located nodes)");
    return fading * std::pow(distance_m, -model.path_loss_exponent);
}

/// Per-channel power allocation with its budget.
struct PowerAllocation {
    std::vector<double> watts;
    double budget_w = 0.0;

    double total() const { return std::accumulate(watts.begin(), watts.end(), 0.0); }

    bool feasible(double rel_tol = 1e-9) const {
        for (double p : watts)
            if (p < 0) return false;
        return total() <= budget_w * (1.0 + rel_tol) + 1e-300;
    }

    static PowerAllocation zero(int channels, double budget) {
        return {std::vector<double>(static_cast<std::size_t>(channels), 0.0), budget};
    }

    friend bool operator==(const PowerAllocation&, const PowerAllocation&) = default;
};

/// Channel power gains for every ordered node pair plus jammer->node, for one
/// strategy-updating period. Row `node_count` holds the jammer.
class LinkGains {
public:
    LinkGains() = default;
    LinkGains(int nodes, int channels)
        : nodes_(nodes), channels_(channels),
          gains_(static_cast<std::size_t>((nodes + 1) * nodes * channels), 0.0) {}

    int node_count() const { return nodes_; }
    int channel_count() const { return channels_; }

    std::span<const double> link(NodeId from, NodeId to) const {
        return {gains_.data() + offset(from, to), static_cast<std::size_t>(channels_)};
    }
    std::span<double> link(NodeId from, NodeId to) {
        return {gains_.data() + offset(from, to), static_cast<std::size_t>(channels_)};
    }
    std::span<const double> jammer_link(NodeId to) const { return link(nodes_, to); }
    std::span<double> jammer_link(NodeId to) { return link(nodes_, to); }

    /// One block-fading realization, a pure function of (scenario seed, period).
    static LinkGains draw(const Scenario& scn, std::uint64_t period) {
        const int n = scn.node_count();
        const auto& ch = scn.channel;
        LinkGains g(n, ch.num_channels);
        Rng rng(scn.rng_seed, {static_cast<std::uint64_t>(Stream::gains), period});
        const double mean = ch.mean_fading();
        for (int from = 0; from <= n; ++from) {
            const Position src = from == n ? scn.jammer.position : scn.nodes[static_cast<std::size_t>(from)];
            for (int to = 0; to < n; ++to) {
                auto row = g.link(from, to);
                for (auto& h : row) {
                    // Always consume the draw so the stream layout is independent of geometry.
                    const double fade = rng.exponential(mean);
                    if (from == to) continue;
                    h = path_gain(distance(src, scn.nodes[static_cast<std::size_t>(to)]), fade, ch);
                }
            }
        }
        return g;
    }

    /// Large-scale gains: every fading coefficient replaced by its mean.
    static LinkGains mean_field(const Scenario& scn) {
        const int n = scn.node_count();
        const auto& ch = scn.channel;
        LinkGains g(n, ch.num_channels);
        for (int from = 0; from <= n; ++from) {
            const Position src = from == n ? scn.jammer.position : scn.nodes[static_cast<std::size_t>(from)];
            for (int to = 0; to < n; ++to) {
                if (from == to) continue;
                const double h = path_gain(distance(src, scn.nodes[static_cast<std::size_t>(to)]), ch.mean_fading(), ch);
                for (auto& v : g.link(from, to)) v = h;
            }
        }
        return g;
    }

    friend bool operator==(const LinkGains&, const LinkGains&) = default;

private:
    std::size_t offset(NodeId from, NodeId to) const {
        return static_cast<std::size_t>((from * nodes_ + to) * channels_);
    }

    int nodes_ = 0;
    int channels_ = 0;
    std::vector<double> gains_;
};

/// Interference power (watts) at every receiver, per channel.
class InterferenceMap {
public:
    InterferenceMap() = default;
    InterferenceMap(int nodes, int channels)
        : channels_(channels), watts_(static_cast<std::size_t>(nodes * channels), 0.0) {}

    std::span<const double> at(NodeId node) const {
        return {watts_.data() + static_cast<std::size_t>(node * channels_), static_cast<std::size_t>(channels_)};
    }
    std::span<double> at(NodeId node) {
        return {watts_.data() + static_cast<std::size_t>(node * channels_), static_cast<std::size_t>(channels_)};
    }

    friend bool operator==(const InterferenceMap&, const InterferenceMap&) = default;

private:
    int channels_ = 0;
    std::vector<double> watts_;
};

/// Jamming power received at `at` on `channel`: P_j^f * H_j^f. Legitimate links
/// use orthogonal channels, so the jammer is the only interferer.
inline double received_interference(const PowerAllocation& jammer_alloc, const LinkGains& gains, NodeId at,
                                    int channel) {
    const auto f = static_cast<std::size_t>(channel);
    return jammer_alloc.watts.at(f) * gains.jammer_link(at)[f];
}

inline InterferenceMap interference_map(const PowerAllocation& jammer_alloc, const LinkGains& gains) {
    InterferenceMap map(gains.node_count(), gains.channel_count());
    for (NodeId m = 0; m < gains.node_count(); ++m) {
        auto row = map.at(m);
        for (int f = 0; f < gains.channel_count(); ++f) row[static_cast<std::size_t>(f)] =
            received_interference(jammer_alloc, gains, m, f);
    }
    return map;
}

inline double sinr(double power_w, double gain, double interference_w, const ChannelModel& model) {
    return power_w * gain / (interference_w + model.noise_power_w());
}

/// Shannon throughput summed over channels, bit/s.
inline double link_throughput(std::span<const double> power_w, std::span<const double> gains,
                              std::span<const double> interference_w, const ChannelModel& model) {
    double bits = 0.0;
    for (std::size_t f = 0; f < power_w.size(); ++f) {
        if (power_w[f] <= 0) continue;
        bits += std::log2(1.0 + sinr(power_w[f], gains[f], interference_w[f], model));
    }
    return model.bandwidth_hz * bits;
}

/// Mean sojourn time of a single-server queue in packet units, 1/(mu - lambda).
/// Empty when the link cannot carry the offered load.
inline std::optional<double> link_delay(double throughput_bps, double arrival_bps, const ChannelModel& model) {
    if (arrival_bps < 0) throw ModelError("link_delay: negative arrival rate");
    const double mu = throughput_bps / model.packet_size_bits;
    const double lambda = arrival_bps / model.packet_size_bits;
    if (mu <= lambda) return std::nullopt;
    return 1.0 / (mu - lambda);
}

}  // namespace xlayer
