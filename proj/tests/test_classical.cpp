#include "qdnand/classical.hpp"
#include "qdnand/errors.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace qdnand;

TEST(EvalNand, TruthTable) {
    EXPECT_EQ(eval_nand(build_tree(1, "11")), 0);
    EXPECT_EQ(eval_nand(build_tree(1, "00")), 1);
    EXPECT_EQ(eval_nand(build_tree(1, "01")), 1);
    EXPECT_EQ(eval_nand(build_tree(1, "10")), 1);
    EXPECT_EQ(eval_nand(build_tree(2, "1011")), 1);
    EXPECT_EQ(eval_nand(build_tree(3, "10110010")), 1);
}

TEST(EvalNand, NotMarkersInvert) {
    const TreeSpec t = build_tree(2, "1011");
    EXPECT_EQ(eval_nand(with_not_markers(t, {1})), 0);
    // NOT on node 3 (NAND(1,1) = 0 becomes 1): root = NAND(1, 1) = 0.
    EXPECT_EQ(eval_nand(with_not_markers(t, {3})), 0);
    EXPECT_EQ(eval_nand(with_not_markers(t, {2, 3})), 1);
}

TEST(EvalNand, LengthMismatch) {
    const TreeSpec t = build_tree(2, "1011");
    const std::vector<Bit> short_bits{1, 0};
    EXPECT_THROW(eval_nand(t, short_bits), InputError);
    EXPECT_THROW(eval_randomized(t, short_bits, 0), InputError);
}

TEST(EvalRandomized, DepthOneQueryCounts) {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const QueryStats a = eval_randomized(build_tree(1, "00"), std::vector<Bit>{0, 0}, seed);
        EXPECT_EQ(a.result, 1);
        EXPECT_EQ(a.queries, 1);
        const QueryStats b = eval_randomized(build_tree(1, "11"), std::vector<Bit>{1, 1}, seed);
        EXPECT_EQ(b.result, 0);
        EXPECT_EQ(b.queries, 2);
        EXPECT_EQ(b.seed, seed);
    }
}

TEST(EvalRandomized, AgreesWithDeterministicValue) {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const int depth = 1 + trial % 8;
        std::set<int> marks;
        if (trial % 3 == 0) {
            marks.insert(1 + static_cast<int>(rng() % ((1U << depth) - 1)));
        }
        const TreeSpec t = with_not_markers(
            build_tree(depth, std::span<const Bit>(test::random_bits(1 << depth, rng))), marks);
        const QueryStats q = eval_randomized(t, t.input_bits, rng());
        EXPECT_EQ(q.result, eval_nand(t));
        EXPECT_GE(q.queries, 1);
        EXPECT_LE(q.queries, t.leaf_count());
        EXPECT_EQ(eval_randomized(t, t.input_bits, q.seed).queries, q.queries);
    }
}

TEST(EvalRandomized, ShortCircuitSavesQueriesAtCriticalBias) {
    double total = 0.0;
    const int depth = 8;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto bits = draw_bits(1 << depth, kCriticalZeroProbability, s);
        const TreeSpec t = build_tree(depth, std::span<const Bit>(bits));
        total += eval_randomized(t, bits, mix_seed(s, 2)).queries;
    }
    EXPECT_LT(total / 200, 0.5 * (1 << depth));
}

TEST(OracleExpectation, Examples) {
    const TreeSpec two = build_tree(2, "0000");
    EXPECT_DOUBLE_EQ(oracle_expectation(two, std::vector<double>{1, 1, 0, 0}), 1.0);
    EXPECT_DOUBLE_EQ(oracle_expectation(two, std::vector<double>{0.5, 0.5, 0.5, 0.5}), 7.0 / 16);
    EXPECT_DOUBLE_EQ(oracle_expectation(two, std::vector<double>(4, 0.0)),
                     eval_nand(two, std::vector<Bit>(4, 0)));
}

TEST(OracleExpectation, ConclusionPolynomial) {
    const TreeSpec two = build_tree(2, "0000");
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const std::vector<double> p{u(rng), u(rng), u(rng), u(rng)};
        const double poly = p[0] * p[1] + p[2] * p[3] - p[0] * p[1] * p[2] * p[3];
        EXPECT_NEAR(oracle_expectation(two, p), poly, 1e-12);
    }
}

TEST(OracleExpectation, DeterministicProbabilitiesMatchEvaluation) {
    for (int depth = 1; depth <= 3; ++depth) {
        const int n = 1 << depth;
        const TreeSpec t = build_tree(depth, std::span<const Bit>(std::vector<Bit>(n, 0)));
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const auto bits = test::bits_of(v, n);
            std::vector<double> p(bits.begin(), bits.end());
            EXPECT_EQ(oracle_expectation(t, p), static_cast<double>(eval_nand(t, bits)));
        }
    }
}

TEST(OracleExpectation, Limits) {
    const TreeSpec big = build_tree(5, std::span<const Bit>(std::vector<Bit>(32, 0)));
    EXPECT_THROW(oracle_expectation(big, std::vector<double>(32, 0.5)), CapacityError);
    const TreeSpec two = build_tree(2, "0000");
    EXPECT_THROW(oracle_expectation(two, std::vector<double>(3, 0.5)), InputError);
    EXPECT_THROW(oracle_expectation(two, std::vector<double>{0.5, 0.5, 1.5, 0.5}), InputError);
}

TEST(DrawBits, BiasAndDeterminism) {
    const auto a = draw_bits(20000, 0.3, 12);
    EXPECT_EQ(a, draw_bits(20000, 0.3, 12));
    int zeros = 0;
    for (Bit b : a) {
        zeros += b == 0;
    }
    EXPECT_NEAR(zeros / 20000.0, 0.3, 0.015);
    EXPECT_THROW(draw_bits(4, 1.5, 0), InputError);
    EXPECT_NEAR(kCriticalZeroProbability, (1 - kCriticalZeroProbability) *
                                              (1 - kCriticalZeroProbability), 1e-15);
}
