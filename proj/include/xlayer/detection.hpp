#pragma once

// Bayesian-learning interference detector. The unknown interference I on a
// monitored link is given a discrete prior over a grid; every received bit is
// weak evidence about the SINR PH/(I+eta) and therefore about I. Posteriors are
// kept in the log domain and only the per-batch (correct, incorrect) counts
// enter the likelihood.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "xlayer/errors.hpp"
#include "xlayer/io.hpp"

namespace xlayer {

struct InterferenceGrid {
    double min_w = 0.0;
    double max_w = 1e-7;
    double step_w = 1e-9;

    std::size_t size() const { return static_cast<std::size_t>(std::llround((max_w - min_w) / step_w)) + 1; }

    std::vector<double> values() const {
        validate();
        std::vector<double> v(size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = min_w + static_cast<double>(k) * step_w;
        return v;
    }

    void validate() const {
        if (!(step_w > 0)) throw ConfigError("grid.step_w", "must be > 0");
        if (!(max_w > min_w)) throw ConfigError("grid.max_w", "must exceed grid.min_w");
        if (min_w != 0.0) throw ConfigError("grid.min_w", "grid must start at 0 W");
    }

    friend bool operator==(const InterferenceGrid&, const InterferenceGrid&) = default;
};

/// Probability mass over the interference grid.
struct Posterior {
    std::vector<double> support_w;
    std::vector<double> mass;
    std::uint64_t events = 0;  // bits consumed so far

    static Posterior uniform(const InterferenceGrid& grid) {
        Posterior p;
        p.support_w = grid.values();
        p.mass.assign(p.support_w.size(), 1.0 / static_cast<double>(p.support_w.size()));
        return p;
    }

    std::size_t mode_index() const {
        return static_cast<std::size_t>(std::max_element(mass.begin(), mass.end()) - mass.begin());
    }
    double mode_w() const { return support_w[mode_index()]; }
    double max_mass() const { return mass[mode_index()]; }

    /// P{lo <= I <= hi}.
    double mass_between(double lo, double hi) const {
        double s = 0.0;
        for (std::size_t k = 0; k < mass.size(); ++k)
            if (support_w[k] >= lo && support_w[k] <= hi) s += mass[k];
        return s;
    }

    double mean_w() const {
        double s = 0.0;
        for (std::size_t k = 0; k < mass.size(); ++k) s += support_w[k] * mass[k];
        return s;
    }

    void write_csv(std::ostream& os) const {
        os << "interference_watts,mass\n";
        for (std::size_t k = 0; k < mass.size(); ++k) os << fmt_double(support_w[k]) << ',' << fmt_double(mass[k]) << '\n';
    }
};

struct BitEvent {
    bool correct = true;
    int channel = 0;
    std::uint64_t period = 0;

    friend bool operator==(const BitEvent&, const BitEvent&) = default;
};

struct EventCounts {
    std::uint64_t correct = 0;
    std::uint64_t incorrect = 0;

    std::uint64_t total() const { return correct + incorrect; }

    static EventCounts of(std::span<const BitEvent> events) {
        EventCounts c;
        for (const auto& e : events) (e.correct ? c.correct : c.incorrect) += 1;
        return c;
    }
};

/// Bit error probability as a function of linear SINR.
struct BerModel {
    enum class Kind { analytic_bpsk, fitted_exponential };

    Kind kind = Kind::analytic_bpsk;
    double a = 0.0;      // fitted: a * exp(-b * gamma) + floor
    double b = 0.0;
    double floor = 0.0;
    double rms_residual = 0.0;

    static BerModel analytic() { return {}; }
    static BerModel fitted(double a, double b, double floor) { return {Kind::fitted_exponential, a, b, floor, 0.0}; }

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["kind"] = kind == Kind::analytic_bpsk ? "analytic-bpsk-awgn" : "fitted-exponential";
        if (kind == Kind::fitted_exponential) {
            j["a"] = a;
            j["b"] = b;
            j["floor"] = floor;
            j["rms_residual"] = rms_residual;
        }
        return j;
    }

    static BerModel from_json(const nlohmann::json& j) {
        const auto kind = j.value("kind", std::string("analytic-bpsk-awgn"));
        if (kind == "analytic-bpsk-awgn") return analytic();
        if (kind != "fitted-exponential") throw ConfigError("ber_model.kind", "unknown kind '" + kind + "'");
        BerModel m = fitted(j.at("a").get<double>(), j.at("b").get<double>(), j.at("floor").get<double>());
        m.rms_residual = j.value("rms_residual", 0.0);
        return m;
    }
};

/// Coherent BPSK over AWGN, Q(sqrt(2 gamma)); or the clamped exponential fit.
inline double ber(double gamma, const BerModel& model) {
    if (gamma < 0) throw ModelError("ber: negative SINR");
    if (model.kind == BerModel::Kind::analytic_bpsk) return 0.5 * std::erfc(std::sqrt(gamma));
    return std::clamp(model.a * std::exp(-model.b * gamma) + model.floor, 0.0, 0.5);
}

struct BerSample {
    double sinr = 0.0;
    double ber = 0.0;
};

namespace detail {

struct ExpFit {
    double a = 0.0;
    double floor = 0.0;
    double cost = std::numeric_limits<double>::infinity();
};

// For a fixed decay rate the model is linear in (a, floor): weighted normal equations.
inline ExpFit fit_linear_part(std::span<const BerSample> s, std::span<const double> w, double b) {
    double swee = 0, swe = 0, sw = 0, swey = 0, swy = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double e = std::exp(-b * s[k].sinr);
        swee += w[k] * e * e;
        swe += w[k] * e;
        sw += w[k];
        swey += w[k] * e * s[k].ber;
        swy += w[k] * s[k].ber;
    }
    ExpFit f;
    const double det = swee * sw - swe * swe;
    if (std::abs(det) > 1e-300 * std::max(1.0, swee * sw)) {
        f.a = (swey * sw - swe * swy) / det;
        f.floor = (swee * swy - swe * swey) / det;
    }
    if (!(f.floor >= 0)) {  // keep the irreducible floor physical
        f.floor = 0.0;
        f.a = swee > 0 ? swey / swee : 0.0;
    }
    f.cost = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double r = f.a * std::exp(-b * s[k].sinr) + f.floor - s[k].ber;
        f.cost += w[k] * r * r;
    }
    return f;
}

}  // namespace detail

/// Least-squares fit of a*exp(-b*gamma) + floor with relative weighting.
/// Needs at least three samples spanning at least 10 dB of SINR.
inline BerModel fit_ber_curve(std::span<const BerSample> samples) {
    if (samples.size() < 3) throw ModelError("fit_ber_curve: need at least 3 samples");
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (const auto& s : samples) {
        if (!(s.sinr >= 0) || !(s.ber >= 0) || s.ber > 1) throw ModelError("fit_ber_curve: sample out of range");
        lo = std::min(lo, s.sinr);
        hi = std::max(hi, s.sinr);
    }
    if (hi == lo) throw ModelError("fit_ber_curve: degenerate samples (all SINR equal)");
    if (lo > 0 && hi < 10.0 * lo) throw ModelError("fit_ber_curve: samples must span at least 10 dB of SINR");

    std::vector<double> w(samples.size());
    for (std::size_t k = 0; k < samples.size(); ++k) {
        const double y = std::max(samples[k].ber, 1e-6);
        w[k] = 1.0 / (y * y);
    }

    // Coarse log-spaced scan of the decay rate, then golden-section refinement.
    const double scale = 1.0 / hi;
    const int n_scan = 600;
    const double log_lo = std::log(1e-4 * scale), log_hi = std::log(1e4 * scale * std::max(1.0, hi / std::max(lo, 1e-12)));
    auto cost_at = [&](double logb) { return detail::fit_linear_part(samples, w, std::exp(logb)).cost; };
    int best_k = 0;
    double best_cost = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n_scan; ++k) {
        const double c = cost_at(log_lo + (log_hi - log_lo) * k / n_scan);
        if (c < best_cost) {
            best_cost = c;
            best_k = k;
        }
    }
    const double dstep = (log_hi - log_lo) / n_scan;
    double x0 = log_lo + (best_k - 1) * dstep, x3 = log_lo + (best_k + 1) * dstep;
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = x3 - gr * (x3 - x0), x2 = x0 + gr * (x3 - x0);
    double f1 = cost_at(x1), f2 = cost_at(x2);
    for (int it = 0; it < 200 && (x3 - x0) > 1e-15; ++it) {
        if (f1 < f2) {
            x3 = x2;
            x2 = x1;
            f2 = f1;
            x1 = x3 - gr * (x3 - x0);
            f1 = cost_at(x1);
        } else {
            x0 = x1;
            x1 = x2;
            f1 = f2;
            x2 = x0 + gr * (x3 - x0);
            f2 = cost_at(x2);
        }
    }
    const double b = std::exp(0.5 * (x0 + x3));
    const auto lin = detail::fit_linear_part(samples, w, b);

    BerModel m = BerModel::fitted(lin.a, b, lin.floor);
    double ss = 0.0;
    for (const auto& s : samples) {
        const double r = m.a * std::exp(-m.b * s.sinr) + m.floor - s.ber;
        ss += r * r;
    }
    m.rms_residual = std::sqrt(ss / static_cast<double>(samples.size()));
    return m;
}

/// Known quantities of the monitored link on one channel: transmit power,
/// channel gain (from channel estimation) and noise power.
struct ChannelContext {
    double power_w = 0.0;
    double gain = 0.0;
    double noise_w = 0.0;

    double sinr(double interference_w) const { return power_w * gain / (interference_w + noise_w); }
};

/// log P{events | I = i}. -inf when an observed outcome has probability zero.
inline double log_likelihood(const EventCounts& counts, double interference_w, const ChannelContext& ctx,
                             const BerModel& model) {
    if (!(ctx.power_w * ctx.gain > 0)) throw ModelError("log_likelihood: P*H must be positive");
    const double p = ber(ctx.sinr(interference_w), model);
    double ll = 0.0;
    if (counts.incorrect > 0) {
        if (p <= 0) return -std::numeric_limits<double>::infinity();
        ll += static_cast<double>(counts.incorrect) * std::log(p);
    }
    if (counts.correct > 0) {
        if (p >= 1) return -std::numeric_limits<double>::infinity();
        ll += static_cast<double>(counts.correct) * std::log1p(-p);
    }
    return ll;
}

inline double log_likelihood(std::span<const BitEvent> events, double interference_w, const ChannelContext& ctx,
                             const BerModel& model) {
    if (events.empty()) throw ModelError("log_likelihood: no events");
    return log_likelihood(EventCounts::of(events), interference_w, ctx, model);
}

/// Bayes update of `prior` by a batch of conditionally independent bit outcomes.
inline Posterior posterior_update(const Posterior& prior, const EventCounts& counts, const ChannelContext& ctx,
                                  const BerModel& model) {
    if (counts.total() == 0) return prior;
    const std::size_t n = prior.mass.size();
    std::vector<double> logp(n);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < n; ++k) {
        logp[k] = prior.mass[k] > 0 ? std::log(prior.mass[k]) + log_likelihood(counts, prior.support_w[k], ctx, model)
                                    : -std::numeric_limits<double>::infinity();
        top = std::max(top, logp[k]);
    }
    if (!std::isfinite(top)) throw ModelError("posterior_update: model inconsistency (zero likelihood everywhere)");
    Posterior out;
    out.support_w = prior.support_w;
    out.mass.resize(n);
    double z = 0.0;
    for (std::size_t k = 0; k < n; ++k) z += out.mass[k] = std::exp(logp[k] - top);
    for (auto& m : out.mass) m /= z;
    out.events = prior.events + counts.total();
    return out;
}

inline Posterior posterior_update(const Posterior& prior, std::span<const BitEvent> events, const ChannelContext& ctx,
                                  const BerModel& model) {
    return posterior_update(prior, EventCounts::of(events), ctx, model);
}

struct Convergence {
    double target_mass = 0.99;
    std::uint64_t max_events = 100000;  // per channel
};

/// One transmission's worth of bit outcomes across channels; std::nullopt ends the stream.
using BatchSource = std::function<std::optional<std::vector<BitEvent>>()>;

/// Per-channel sequential learning over a stream of transmissions. Only
/// channels with non-zero transmit power are monitored; a channel stops
/// consuming once it has converged or has seen `max_events` bits. Unmonitored
/// channels keep the prior.
inline std::vector<Posterior> run_detector(std::span<const ChannelContext> channels, const BatchSource& stream,
                                           const InterferenceGrid& grid, const BerModel& model,
                                           const Convergence& conv = {}) {
    std::vector<Posterior> post(channels.size(), Posterior::uniform(grid));
    std::vector<bool> active(channels.size());
    for (std::size_t f = 0; f < channels.size(); ++f) active[f] = channels[f].power_w > 0;
    auto done = [&] { return std::none_of(active.begin(), active.end(), [](bool a) { return a; }); };

    while (!done()) {
        auto batch = stream();
        if (!batch) break;
        std::vector<EventCounts> counts(channels.size());
        for (const auto& e : *batch) {
            if (e.channel < 0 || static_cast<std::size_t>(e.channel) >= channels.size())
                throw ModelError("run_detector: event on unknown channel");
            auto& c = counts[static_cast<std::size_t>(e.channel)];
            (e.correct ? c.correct : c.incorrect) += 1;
        }
        for (std::size_t f = 0; f < channels.size(); ++f) {
            if (!active[f] || counts[f].total() == 0) continue;
            post[f] = posterior_update(post[f], counts[f], channels[f], model);
            if (post[f].max_mass() >= conv.target_mass || post[f].events >= conv.max_events) active[f] = false;
        }
    }
    return post;
}

/// Link-level posterior when every monitored channel sees the same interference
/// (the jammer spreads its power evenly). With a uniform prior this is the
/// normalized product of the per-channel posteriors.
inline Posterior pooled_posterior(std::span<const Posterior> per_channel, const std::vector<bool>& monitored) {
    if (per_channel.empty()) throw ModelError("pooled_posterior: no channels");
    Posterior out;
    out.support_w = per_channel.front().support_w;
    std::vector<double> log_mass(out.support_w.size(), 0.0);
    for (std::size_t f = 0; f < per_channel.size(); ++f) {
        if (f < monitored.size() && !monitored[f]) continue;
        if (per_channel[f].support_w != out.support_w) throw ModelError("pooled_posterior: channels use different grids");
        for (std::size_t k = 0; k < log_mass.size(); ++k) log_mass[k] += std::log(per_channel[f].mass[k]);
        out.events += per_channel[f].events;
    }
    const double top = *std::max_element(log_mass.begin(), log_mass.end());
    if (!std::isfinite(top)) throw ModelError("pooled_posterior: model inconsistency, no grid point survives");
    double z = 0.0;
    out.mass.resize(log_mass.size());
    for (std::size_t k = 0; k < log_mass.size(); ++k) z += out.mass[k] = std::exp(log_mass[k] - top);
    for (auto& m : out.mass) m /= z;
    return out;
}

struct ClassifierConfig {
    enum class Variant { interference_range, ber_threshold, inr_threshold };

    Variant variant = Variant::interference_range;
    double i_lwr_w = 0.0;
    double i_upp_w = std::numeric_limits<double>::infinity();
    double p_th = 0.5;
    int min_channels_flagged = 1;
    double ber_th = 0.05;
    double inr_th_db = 0.0;
    double inr_prob = 0.9;

    void validate() const {
        if (i_lwr_w > i_upp_w) throw ConfigError("classifier.i_lwr_w", "must not exceed i_upp_w");
        if (p_th < 0 || p_th > 1) throw ConfigError("classifier.p_th", "must lie in [0, 1]");
        if (min_channels_flagged < 1) throw ConfigError("classifier.min_channels_flagged", "must be >= 1");
        if (ber_th < 0 || ber_th > 0.5) throw ConfigError("classifier.ber_th", "must lie in [0, 0.5]");
        if (inr_prob < 0 || inr_prob > 1) throw ConfigError("classifier.inr_prob", "must lie in [0, 1]");
    }
};

/// What the receiver has accumulated for one link in one period.
struct DetectionReport {
    std::vector<Posterior> posteriors;  // per channel; unmonitored channels hold the prior
    std::vector<bool> monitored;
    std::uint64_t bits = 0;
    std::uint64_t bit_errors = 0;
    double noise_w = 0.0;

    double empirical_ber() const { return bits ? static_cast<double>(bit_errors) / static_cast<double>(bits) : 0.0; }
};

enum class Verdict { not_attacked, attacked };

inline bool channel_flagged(const Posterior& p, const ClassifierConfig& cfg) {
    return p.mass_between(cfg.i_lwr_w, cfg.i_upp_w) >= cfg.p_th;
}

/// Interference-range rule (posterior mass in [I_lwr, I_upp] >= P_th on enough
/// channels), empirical-BER threshold, or P{INR > INR_th} > prob.
inline Verdict classify(const DetectionReport& r, const ClassifierConfig& cfg) {
    auto is_monitored = [&](std::size_t f) { return r.monitored.empty() || r.monitored[f]; };
    switch (cfg.variant) {
    case ClassifierConfig::Variant::interference_range: {
        int flagged = 0;
        for (std::size_t f = 0; f < r.posteriors.size(); ++f)
            if (is_monitored(f) && channel_flagged(r.posteriors[f], cfg)) ++flagged;
        return flagged >= cfg.min_channels_flagged ? Verdict::attacked : Verdict::not_attacked;
    }
    case ClassifierConfig::Variant::ber_threshold:
        return r.empirical_ber() >= cfg.ber_th ? Verdict::attacked : Verdict::not_attacked;
    case ClassifierConfig::Variant::inr_threshold: {
        const double i_th = r.noise_w * std::pow(10.0, cfg.inr_th_db / 10.0);
        int flagged = 0;
        for (std::size_t f = 0; f < r.posteriors.size(); ++f) {
            if (!is_monitored(f)) continue;
            double above = 0.0;
            const auto& p = r.posteriors[f];
            for (std::size_t k = 0; k < p.mass.size(); ++k)
                if (p.support_w[k] > i_th) above += p.mass[k];
            if (above > cfg.inr_prob) ++flagged;
        }
        return flagged >= cfg.min_channels_flagged ? Verdict::attacked : Verdict::not_attacked;
    }
    }
    return Verdict::not_attacked;
}

inline Verdict classify(std::span<const Posterior> posteriors, const ClassifierConfig& cfg) {
    DetectionReport r;
    r.posteriors.assign(posteriors.begin(), posteriors.end());
    return classify(r, cfg);
}

/// One line of an event trace. Either a single bit ("correct") or an aggregate
/// ("bits", "errors"). SINR or (signal_w, noise_w) describe the link state.
struct TraceRecord {
    int channel = 0;
    std::uint64_t period = 0;
    std::optional<double> sinr;
    std::optional<double> signal_w;
    std::optional<double> noise_w;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

inline std::vector<TraceRecord> read_trace_jsonl(std::istream& in) {
    std::vector<TraceRecord> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        const std::string where = "trace line " + std::to_string(lineno);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(where, e.what());
        }
        TraceRecord r;
        r.channel = j.value("channel", 0);
        r.period = j.value("period", std::uint64_t{0});
        if (j.contains("sinr")) r.sinr = j["sinr"].get<double>();
        if (j.contains("signal_w")) r.signal_w = j["signal_w"].get<double>();
        if (j.contains("noise_w")) r.noise_w = j["noise_w"].get<double>();
        if (j.contains("correct")) {
            r.bits = 1;
            r.errors = j["correct"].get<bool>() ? 0 : 1;
        } else if (j.contains("bits")) {
            r.bits = j["bits"].get<std::uint64_t>();
            r.errors = j.value("errors", std::uint64_t{0});
            if (r.errors > r.bits) throw ConfigError(where + ".errors", "exceeds bits");
        } else {
            throw ConfigError(where, "needs either 'correct' or 'bits'");
        }
        if (r.channel < 0) throw ConfigError(where + ".channel", "must be >= 0");
        out.push_back(r);
    }
    return out;
}

/// Groups trace records by SINR into (SINR, measured BER) points for curve training.
inline std::vector<BerSample> ber_samples_from_trace(std::span<const TraceRecord> trace) {
    std::map<double, EventCounts> by_sinr;
    for (const auto& r : trace) {
        double g;
        if (r.sinr)
            g = *r.sinr;
        else if (r.signal_w && r.noise_w)
            g = *r.signal_w / *r.noise_w;
        else
            throw ConfigError("trace", "record lacks 'sinr' (or 'signal_w' and 'noise_w')");
        auto& c = by_sinr[g];
        c.incorrect += r.errors;
        c.correct += r.bits - r.errors;
    }
    std::vector<BerSample> out;
    for (const auto& [g, c] : by_sinr)
        if (c.total() > 0)
            out.push_back({g, static_cast<double>(c.incorrect) / static_cast<double>(c.total())});
    return out;
}

}  // namespace xlayer
