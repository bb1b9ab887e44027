#pragma once

// Security/performance trade-off for a node whose link has been found jammed:
// reroute to the best alternative l (fast, risky), stay on the jammed m (slow,
// low risk), or split linearly coded symbols over both paths so that neither
// relay alone can decode (no risk, extra reassembly delay).

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "xlayer/errors.hpp"
#include "xlayer/gf256.hpp"
#include "xlayer/rng.hpp"

namespace xlayer {

struct MitigationParams {
    double alpha = 0.5;
    double beta = 0.5;
    double epsilon = 0.1;                // residual risk of staying on the jammed path
    std::optional<double> utility_min;   // U_th, utility = -delay in seconds; requires -T >= U_th
    std::optional<double> risk_max;      // G_th, requires R <= G_th
    int snc_search_limit = 16;           // largest code dimension r searched

    void validate() const {
        if (alpha < 0) throw ConfigError("mitigation.alpha", "must be >= 0");
        if (beta < 0) throw ConfigError("mitigation.beta", "must be >= 0");
        if (!(alpha + beta > 0)) throw ConfigError("mitigation.alpha", "alpha + beta must be > 0");
        if (!(epsilon > 0 && epsilon <= 1)) throw ConfigError("mitigation.epsilon", "must lie in (0, 1]");
        if (snc_search_limit < 2) throw ConfigError("mitigation.snc_search_limit", "must be >= 2");
    }
};

enum class StrategyKind { reroute, stay, secure_coding };

inline const char* to_string(StrategyKind k) {
    switch (k) {
    case StrategyKind::reroute: return "S_l";
    case StrategyKind::stay: return "S_m";
    case StrategyKind::secure_coding: return "S_SNC";
    }
    return "?";
}

struct StrategyCandidate {
    StrategyKind kind = StrategyKind::reroute;
    double delay_s = 0.0;
    double risk = 1.0;
    double h = 0.0;
    int n_l = 0;  // split, secure coding only
    int n_m = 0;
};

inline double risk_of(StrategyKind k, double epsilon) {
    switch (k) {
    case StrategyKind::reroute: return 1.0;
    case StrategyKind::stay: return epsilon;
    case StrategyKind::secure_coding: return 0.0;
    }
    return 1.0;
}

/// Mean path delay of the split plus the wait for all N_l + N_m messages.
inline double snc_delay(int n_l, int n_m, double t_l, double t_m, double message_rate) {
    if (n_l < 1 || n_m < 1) throw ModelError("snc_delay: both paths must carry at least one symbol");
    if (!(message_rate > 0)) throw ModelError("snc_delay: message rate must be positive");
    const double r = n_l + n_m;
    return (n_l * t_l + n_m * t_m) / r + (r - 1.0) / message_rate;
}

/// h = -alpha * T / T_max - beta * R, with T_max the largest delay among the
/// candidates being compared.
inline double evaluate_h(const StrategyCandidate& c, double max_delay_s, const MitigationParams& p) {
    const double t_hat = max_delay_s > 0 ? c.delay_s / max_delay_s : 0.0;
    return -p.alpha * t_hat - p.beta * c.risk;
}

inline void evaluate_h(std::span<StrategyCandidate> cands, const MitigationParams& p) {
    double t_max = 0.0;
    for (const auto& c : cands) t_max = std::max(t_max, c.delay_s);
    for (auto& c : cands) c.h = evaluate_h(c, t_max, p);
}

struct MitigationChoice {
    std::array<StrategyCandidate, 3> candidates;  // reroute, stay, secure coding
    std::size_t chosen = 0;
    bool feasible = true;  // false: every candidate violated a bound; least-violating returned

    const StrategyCandidate& best() const { return candidates[chosen]; }
};

/// Best (N_l, N_m) split: secure coding carries no risk, so the best code is
/// the one with the least delay.
inline StrategyCandidate best_secure_split(double t_l, double t_m, double message_rate, int search_limit) {
    StrategyCandidate best{StrategyKind::secure_coding, std::numeric_limits<double>::infinity(), 0.0, 0.0, 0, 0};
    for (int r = 2; r <= search_limit; ++r)
        for (int n_l = 1; n_l < r; ++n_l) {
            const double t = snc_delay(n_l, r - n_l, t_l, t_m, message_rate);
            if (t < best.delay_s) {
                best.delay_s = t;
                best.n_l = n_l;
                best.n_m = r - n_l;
            }
        }
    return best;
}

/// Picks among rerouting, staying and secure coding by maximizing h, subject to
/// the optional utility and risk bounds.
inline MitigationChoice choose_strategy(double t_l, double t_m, double message_rate, const MitigationParams& p) {
    p.validate();
    if (!std::isfinite(t_l) || !std::isfinite(t_m)) throw ModelError("choose_strategy: path delays must be finite");
    MitigationChoice out;
    out.candidates[0] = {StrategyKind::reroute, t_l, risk_of(StrategyKind::reroute, p.epsilon)};
    out.candidates[1] = {StrategyKind::stay, t_m, risk_of(StrategyKind::stay, p.epsilon)};
    out.candidates[2] = best_secure_split(t_l, t_m, message_rate, p.snc_search_limit);
    evaluate_h(out.candidates, p);

    auto violation = [&](const StrategyCandidate& c) {
        double v = 0.0;
        if (p.utility_min) v += std::max(0.0, *p.utility_min + c.delay_s) / std::max(std::abs(*p.utility_min), 1e-12);
        if (p.risk_max) v += std::max(0.0, c.risk - *p.risk_max);
        return v;
    };

    // Ties resolve toward secure coding, then staying, as in the decision order.
    const std::array<std::size_t, 3> preference{2, 1, 0};
    std::optional<std::size_t> best;
    for (std::size_t k : preference) {
        if (violation(out.candidates[k]) > 0) continue;
        if (!best || out.candidates[k].h > out.candidates[*best].h) best = k;
    }
    if (!best) {
        out.feasible = false;
        for (std::size_t k : preference)
            if (!best || violation(out.candidates[k]) < violation(out.candidates[*best])) best = k;
    }
    out.chosen = *best;
    return out;
}

struct SecureCode {
    int dimension = 0;  // r
    int n_l = 0;
    int n_m = 0;
    gf256::Matrix encoding;  // r x r, invertible

    std::vector<int> rows_l() const {
        std::vector<int> v(static_cast<std::size_t>(n_l));
        std::iota(v.begin(), v.end(), 0);
        return v;
    }
    std::vector<int> rows_m() const {
        std::vector<int> v(static_cast<std::size_t>(n_m));
        std::iota(v.begin(), v.end(), n_l);
        return v;
    }

    /// Wiretap condition: full rank overall, each relay's span is deficient.
    bool secure() const {
        const auto l = rows_l(), m = rows_m();
        return gf256::rank(encoding) == dimension && gf256::rank(encoding.select_rows(l)) < dimension &&
               gf256::rank(encoding.select_rows(m)) < dimension;
    }
};

/// Vandermonde code on r distinct random non-zero field elements.
inline SecureCode generate_code(int r, int n_l, int n_m, Rng& rng) {
    if (r < 2) throw ModelError("generate_code: dimension must be >= 2");
    if (n_l < 1 || n_m < 1) throw ModelError("generate_code: split leaves a path without symbols (max(N_l, N_m) must be < r)");
    if (n_l + n_m != r) throw ModelError("generate_code: N_l + N_m must equal r");
    if (r > static_cast<int>(gf256::kOrder) - 1) throw ModelError("generate_code: r exceeds the number of non-zero field elements");

    std::vector<gf256::Symbol> pool(gf256::kOrder - 1);
    std::iota(pool.begin(), pool.end(), gf256::Symbol{1});
    for (std::size_t i = 0; i < static_cast<std::size_t>(r); ++i) {  // partial Fisher-Yates
        const auto j = i + static_cast<std::size_t>(rng.below(pool.size() - i));
        std::swap(pool[i], pool[j]);
    }
    pool.resize(static_cast<std::size_t>(r));
    return {r, n_l, n_m, gf256::vandermonde(pool)};
}

/// Checked conversion of raw integers to field symbols.
inline std::vector<gf256::Symbol> to_symbols(std::span<const int> raw) {
    std::vector<gf256::Symbol> out;
    out.reserve(raw.size());
    for (int v : raw) {
        if (v < 0 || v >= static_cast<int>(gf256::kOrder)) throw ModelError("symbol " + std::to_string(v) + " is outside GF(256)");
        out.push_back(static_cast<gf256::Symbol>(v));
    }
    return out;
}

struct EncodedMessage {
    std::vector<gf256::Symbol> via_l;  // first N_l entries of Y
    std::vector<gf256::Symbol> via_m;  // remaining N_m entries
};

inline EncodedMessage encode(const SecureCode& code, std::span<const gf256::Symbol> x) {
    if (static_cast<int>(x.size()) != code.dimension) throw ModelError("encode: message length must equal r");
    const auto y = gf256::multiply(code.encoding, x);
    return {{y.begin(), y.begin() + code.n_l}, {y.begin() + code.n_l, y.end()}};
}

/// Thrown when too few coded symbols are available to recover the message.
class InsufficientSymbols : public ModelError {
public:
    InsufficientSymbols(int dimension, int observed_rank)
        : ModelError("decode: insufficient symbols; " + std::to_string(256) + "^" +
                     std::to_string(dimension - observed_rank) + " candidate messages remain"),
          unknown_dims_(dimension - observed_rank) {}

    /// Candidates remaining are 256^unknown_dimensions().
    int unknown_dimensions() const noexcept { return unknown_dims_; }
    double candidate_count() const { return std::pow(256.0, unknown_dims_); }

private:
    int unknown_dims_;
};

/// Number of unknown dimensions left when only the symbols at `rows` are seen.
inline int unknown_dimensions(const SecureCode& code, std::span<const int> rows) {
    return code.dimension - gf256::rank(code.encoding.select_rows(rows));
}

/// Sink-side recovery X = E^-1 Y. Missing symbols are std::nullopt.
inline std::vector<gf256::Symbol> decode(const SecureCode& code, std::span<const std::optional<gf256::Symbol>> y) {
    if (static_cast<int>(y.size()) != code.dimension) throw ModelError("decode: expected r symbol slots");
    std::vector<int> seen;
    for (int k = 0; k < code.dimension; ++k)
        if (y[static_cast<std::size_t>(k)]) seen.push_back(k);
    if (static_cast<int>(seen.size()) < code.dimension)
        throw InsufficientSymbols(code.dimension, gf256::rank(code.encoding.select_rows(seen)));
    const auto e_inv = gf256::inverse(code.encoding);
    if (!e_inv) throw ModelError("decode: encoding matrix is singular");
    std::vector<gf256::Symbol> full(y.size());
    for (std::size_t k = 0; k < y.size(); ++k) full[k] = *y[k];
    return gf256::multiply(*e_inv, full);
}

inline std::vector<gf256::Symbol> decode(const SecureCode& code, const EncodedMessage& msg) {
    std::vector<std::optional<gf256::Symbol>> y;
    for (auto s : msg.via_l) y.emplace_back(s);
    for (auto s : msg.via_m) y.emplace_back(s);
    return decode(code, y);
}

}  // namespace xlayer
