#include <gtest/gtest.h>

#include <cmath>

#include "xlayer/gf256.hpp"
#include "xlayer/mitigation.hpp"

using namespace xlayer;
namespace gf = xlayer::gf256;

namespace {

// Shift-and-add multiply reduced by x^8 + x^4 + x^3 + x + 1; independent of the log tables.
std::uint8_t slow_mul(std::uint8_t a, std::uint8_t b) {
    unsigned acc = 0, x = a;
    for (int bit = 0; bit < 8; ++bit) {
        if (b & (1u << bit)) acc ^= x << bit;
    }
    for (int bit = 15; bit >= 8; --bit)
        if (acc & (1u << bit)) acc ^= 0x11Bu << (bit - 8);
    return static_cast<std::uint8_t>(acc);
}

// Enumerates all combinations of `k` rows out of `n`.
template <class F>
void for_each_subset(int n, int k, F&& f) {
    std::vector<int> idx(static_cast<std::size_t>(k));
    std::function<void(int, int)> rec = [&](int start, int depth) {
        if (depth == k) {
            f(idx);
            return;
        }
        for (int i = start; i < n; ++i) {
            idx[static_cast<std::size_t>(depth)] = i;
            rec(i + 1, depth + 1);
        }
    };
    rec(0, 0);
}

}  // namespace

TEST(Gf256, MultiplyMatchesBitwiseOracle) {
    for (unsigned a = 0; a < 256; ++a)
        for (unsigned b = 0; b < 256; ++b)
            ASSERT_EQ(gf::mul(static_cast<gf::Symbol>(a), static_cast<gf::Symbol>(b)),
                      slow_mul(static_cast<std::uint8_t>(a), static_cast<std::uint8_t>(b)))
                << a << "*" << b;
}

TEST(Gf256, InverseAndPow) {
    for (unsigned a = 1; a < 256; ++a) EXPECT_EQ(gf::mul(static_cast<gf::Symbol>(a), gf::inv(static_cast<gf::Symbol>(a))), 1);
    EXPECT_THROW(gf::inv(0), std::domain_error);
    EXPECT_EQ(gf::pow(3, 255), 1);  // 3 generates the multiplicative group
    EXPECT_EQ(gf::pow(2, 8), 0x1B);
}

TEST(Gf256, MatrixInverseRoundTrip) {
    Rng rng(3);
    int invertible = 0;
    for (int t = 0; t < 50; ++t) {
        gf::Matrix m(4, 4);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) m(r, c) = static_cast<gf::Symbol>(rng.below(256));
        const auto inv = gf::inverse(m);
        EXPECT_EQ(inv.has_value(), gf::determinant(m) != 0);
        EXPECT_EQ(inv.has_value(), gf::rank(m) == 4);
        if (!inv) continue;
        ++invertible;
        for (int c = 0; c < 4; ++c) {
            std::vector<gf::Symbol> e(4, 0);
            e[static_cast<std::size_t>(c)] = 1;
            const auto col = gf::multiply(m, gf::multiply(*inv, e));
            EXPECT_EQ(col, e);
        }
    }
    EXPECT_GT(invertible, 40);
}

TEST(Gf256, VandermondeOnOneTwoThree) {
    const std::vector<gf::Symbol> pts{1, 2, 3};
    const auto v = gf::vandermonde(pts);
    EXPECT_EQ(v(2, 2), gf::mul(3, 3));
    EXPECT_NE(gf::determinant(v), 0);
    EXPECT_EQ(gf::rank(v), 3);
}

TEST(SncDelay, HandExample) {
    // (1*10 ms + 2*40 ms)/3 + 2/100 s
    EXPECT_NEAR(snc_delay(1, 2, 0.01, 0.04, 100.0), 0.05, 1e-15);
    // Equal paths: just the path delay plus the reassembly wait.
    EXPECT_NEAR(snc_delay(1, 1, 0.0, 0.0, 30.0), 1.0 / 30.0, 1e-15);
}

TEST(SncDelay, FastArrivalsReduceToWeightedPathDelay) {
    EXPECT_NEAR(snc_delay(2, 1, 0.01, 0.04, 1e15), 0.02, 1e-12);
}

TEST(SncDelay, GrowsWithCodeLength) {
    double prev = 0.0;
    for (int r = 2; r <= 12; ++r) {
        const double t = snc_delay(r / 2, r - r / 2, 0.02, 0.02, 50.0);
        EXPECT_GT(t, prev);
        prev = t;
    }
    EXPECT_THROW(snc_delay(0, 3, 0.01, 0.01, 10.0), ModelError);
    EXPECT_THROW(snc_delay(1, 1, 0.01, 0.01, 0.0), ModelError);
}

TEST(EvaluateH, HandExample) {
    MitigationParams p;
    const StrategyCandidate c{StrategyKind::stay, 0.03, 0.1};
    EXPECT_NEAR(evaluate_h(c, 0.06, p), -0.5 * 0.5 - 0.5 * 0.1, 1e-15);
}

TEST(EvaluateH, ScaleInvariantInDelayUnits) {
    MitigationParams p;
    p.alpha = 0.3;
    p.beta = 0.7;
    std::array<StrategyCandidate, 3> a{{{StrategyKind::reroute, 0.01, 1.0},
                                        {StrategyKind::stay, 0.05, 0.1},
                                        {StrategyKind::secure_coding, 0.04, 0.0}}};
    auto b = a;
    for (auto& c : b) c.delay_s *= 1000.0;
    evaluate_h(a, p);
    evaluate_h(b, p);
    for (std::size_t k = 0; k < 3; ++k) {
        EXPECT_NEAR(a[k].h, b[k].h, 1e-12);
        EXPECT_LE(a[k].h, 0.0);
        EXPECT_GE(a[k].h, -p.alpha - p.beta);
    }
}

TEST(ChooseStrategy, RiskOnlyPicksSecureCoding) {
    MitigationParams p;
    p.alpha = 0.0;
    p.beta = 1.0;
    for (double tl : {0.001, 0.01, 0.1})
        for (double tm : {0.002, 0.05, 0.5}) EXPECT_EQ(choose_strategy(tl, tm, 100.0, p).best().kind, StrategyKind::secure_coding);
}

TEST(ChooseStrategy, DelayOnlyPicksFasterPlainPath) {
    MitigationParams p;
    p.alpha = 1.0;
    p.beta = 0.0;
    EXPECT_EQ(choose_strategy(0.01, 0.05, 100.0, p).best().kind, StrategyKind::reroute);
    EXPECT_EQ(choose_strategy(0.05, 0.01, 100.0, p).best().kind, StrategyKind::stay);
}

TEST(ChooseStrategy, CandidatesCarryExpectedRiskAndSplit) {
    MitigationParams p;
    const auto c = choose_strategy(0.01, 0.03, 100.0, p);
    EXPECT_EQ(c.candidates[0].risk, 1.0);
    EXPECT_EQ(c.candidates[1].risk, p.epsilon);
    EXPECT_EQ(c.candidates[2].risk, 0.0);
    // Shortest code r = 2 minimizes delay since each extra symbol costs 10 ms of waiting.
    EXPECT_EQ(c.candidates[2].n_l + c.candidates[2].n_m, 2);
    EXPECT_NEAR(c.candidates[2].delay_s, 0.02 + 0.01, 1e-12);
    const double h_best = c.best().h;
    for (const auto& k : c.candidates) EXPECT_LE(k.h, h_best);
}

TEST(ChooseStrategy, BoundsExcludeCandidates) {
    MitigationParams p;
    p.alpha = 1.0;
    p.beta = 0.0;
    p.risk_max = 0.5;  // forbids rerouting
    auto c = choose_strategy(0.01, 0.05, 100.0, p);
    EXPECT_TRUE(c.feasible);
    EXPECT_NE(c.best().kind, StrategyKind::reroute);

    p = {};
    p.utility_min = -0.02;  // delay must stay below 20 ms
    c = choose_strategy(0.01, 0.05, 100.0, p);
    EXPECT_TRUE(c.feasible);
    EXPECT_EQ(c.best().kind, StrategyKind::reroute);

    p.utility_min = -0.001;
    c = choose_strategy(0.01, 0.05, 100.0, p);
    EXPECT_FALSE(c.feasible);
}

TEST(ChooseStrategy, RejectsBadInputs) {
    MitigationParams p;
    p.alpha = p.beta = 0.0;
    EXPECT_THROW(choose_strategy(0.01, 0.01, 10.0, p), ConfigError);
    EXPECT_THROW(choose_strategy(INFINITY, 0.01, 10.0, MitigationParams{}), ModelError);
}

TEST(GenerateCode, ShortestSecureCode) {
    Rng rng(1);
    const auto c = generate_code(2, 1, 1, rng);
    EXPECT_EQ(gf::rank(c.encoding), 2);
    EXPECT_TRUE(c.secure());
}

TEST(GenerateCode, RejectsBadSplits) {
    Rng rng(1);
    EXPECT_THROW(generate_code(3, 3, 0, rng), ModelError);
    EXPECT_THROW(generate_code(1, 1, 0, rng), ModelError);
    EXPECT_THROW(generate_code(4, 1, 2, rng), ModelError);
    EXPECT_THROW(generate_code(256, 128, 128, rng), ModelError);
    EXPECT_NO_THROW(generate_code(255, 128, 127, rng));
}

TEST(GenerateCode, EveryProperRowSubsetIsDeficient) {
    Rng rng(99);
    for (int t = 0; t < 100; ++t) {
        const int r = 2 + static_cast<int>(rng.below(5));
        const int nl = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(r - 1)));
        const auto code = generate_code(r, nl, r - nl, rng);
        ASSERT_EQ(gf::rank(code.encoding), r);
        ASSERT_TRUE(code.secure());
        for (int n = 1; n < r; ++n)
            for_each_subset(r, n, [&](const std::vector<int>& rows) {
                ASSERT_EQ(gf::rank(code.encoding.select_rows(rows)), n);
                ASSERT_EQ(unknown_dimensions(code, rows), r - n);
            });
    }
}

TEST(Encode, ZeroMessageGivesZeroSymbols) {
    Rng rng(5);
    const auto code = generate_code(4, 2, 2, rng);
    const std::vector<gf::Symbol> x(4, 0);
    const auto y = encode(code, x);
    for (auto s : y.via_l) EXPECT_EQ(s, 0);
    for (auto s : y.via_m) EXPECT_EQ(s, 0);
}

TEST(Encode, HandExample) {
    SecureCode code{2, 1, 1, gf::Matrix(2, 2, {1, 1, 1, 2})};
    const std::vector<gf::Symbol> x{5, 7};
    const auto y = encode(code, x);
    ASSERT_EQ(y.via_l.size(), 1u);
    ASSERT_EQ(y.via_m.size(), 1u);
    EXPECT_EQ(y.via_l[0], 5 ^ 7);
    EXPECT_EQ(y.via_l[0], 2);
    EXPECT_EQ(y.via_m[0], 5 ^ slow_mul(2, 7));
    EXPECT_EQ(y.via_m[0], 11);
    EXPECT_EQ(decode(code, y), x);
}

TEST(Encode, RandomRoundTrips) {
    Rng rng(2026);
    for (int t = 0; t < 1000; ++t) {
        const int r = 2 + static_cast<int>(rng.below(7));
        const int nl = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(r - 1)));
        const auto code = generate_code(r, nl, r - nl, rng);
        std::vector<gf::Symbol> x(static_cast<std::size_t>(r));
        for (auto& s : x) s = static_cast<gf::Symbol>(rng.below(256));
        ASSERT_EQ(decode(code, encode(code, x)), x);
    }
    Rng r2(1);
    const auto code = generate_code(3, 1, 2, r2);
    const std::vector<gf::Symbol> bad(2, 0);
    EXPECT_THROW(encode(code, bad), ModelError);
}

TEST(Decode, OneMissingSymbolLeaves256Candidates) {
    Rng rng(8);
    const auto code = generate_code(3, 1, 2, rng);
    const std::vector<gf::Symbol> x{1, 2, 3};
    const auto y = encode(code, x);
    std::vector<std::optional<gf::Symbol>> partial{std::nullopt, y.via_m[0], y.via_m[1]};
    try {
        decode(code, partial);
        FAIL();
    } catch (const InsufficientSymbols& e) {
        EXPECT_EQ(e.unknown_dimensions(), 1);
        EXPECT_EQ(e.candidate_count(), 256.0);
    }
}

TEST(Decode, RelayWithOneOfThreeSymbolsFacesTwoUnknownDimensions) {
    Rng rng(8);
    const auto code = generate_code(3, 1, 2, rng);
    const auto y = encode(code, std::vector<gf::Symbol>{9, 9, 9});
    std::vector<std::optional<gf::Symbol>> partial{y.via_l[0], std::nullopt, std::nullopt};
    try {
        decode(code, partial);
        FAIL();
    } catch (const InsufficientSymbols& e) {
        EXPECT_EQ(e.unknown_dimensions(), 2);
        EXPECT_EQ(e.candidate_count(), 65536.0);
    }
}

TEST(ToSymbols, RangeChecked) {
    const std::vector<int> ok{0, 17, 255};
    EXPECT_EQ(to_symbols(ok), (std::vector<gf::Symbol>{0, 17, 255}));
    const std::vector<int> high{256};
    EXPECT_THROW(to_symbols(high), ModelError);
    const std::vector<int> neg{-1};
    EXPECT_THROW(to_symbols(neg), ModelError);
}
