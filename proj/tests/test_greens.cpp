#include "qdnand/classical.hpp"
#include "qdnand/errors.hpp"
#include "qdnand/greens.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace qdnand;

TEST(GreenLeaf, Examples) {
    const GreenValue a = green_leaf(0.0, 0.0, 0.001);
    EXPECT_NEAR(a.value.real(), 0.0, 1e-12);
    EXPECT_NEAR(a.value.imag(), -1000.0, 1e-9);

    const Complex b = green_leaf(10.0, 0.0, 0.001).value;
    const Complex exact = 1.0 / Complex(-10.0, 0.001);
    EXPECT_NEAR(b.real(), exact.real(), 1e-15);
    EXPECT_NEAR(b.imag(), exact.imag(), 1e-15);
    EXPECT_NEAR(b.real(), -0.1, 1e-8);
    EXPECT_NEAR(b.imag(), -1e-5, 1e-9);

    const GreenValue c = green_leaf(0.0, 0.01, 0.0);
    EXPECT_EQ(c.gamma, kGammaFloor);
    EXPECT_NEAR(c.value.real(), 100.0, 1e-6);
}

TEST(GreenLeaf, RetardedSign) {
    for (double eps : {-3.0, 0.0, 0.5}) {
        for (double e : {-1.0, 0.0, 2.0}) {
            EXPECT_LE(green_leaf(eps, e, 0.01).value.imag(), 0.0);
        }
    }
}

TEST(GreenTree, DepthOneExamples) {
    const TreeSpec zz = build_tree(1, "00");
    const GreenValue g = green_tree(zz, ideal_parameters(zz, 10.0, 0.0), 0.01);
    EXPECT_NEAR(g.value.real(), 1.0 / (0.01 - 2.0 / 0.01), 1e-12);
    EXPECT_NEAR(g.value.real(), -0.0050003, 1e-7);

    const TreeSpec zo = build_tree(1, "01");
    const double e = 0.01;
    const Complex v = green_tree(zo, ideal_parameters(zo, 10.0, 0.0), e).value;
    EXPECT_NEAR(v.real(), -0.009991018065, 1e-11);
    EXPECT_LE(std::abs(v.real() + e), 0.1 * e);

    const TreeSpec oo = build_tree(1, "11");
    EXPECT_GE(std::abs(green_tree(oo, ideal_parameters(oo, 10.0, 0.001), 0.0).value), 100.0);
}

TEST(GreenTree, DerivativeExamples) {
    const TreeSpec zz = build_tree(1, "00");
    const SubtreeGreens s = evaluate_subtrees(zz, ideal_parameters(zz, 10.0, 0.001), 0.0);
    EXPECT_NEAR(s.derivative[2].real(), 1e6, 1e-4);
    EXPECT_NEAR(s.derivative[2].imag(), 0.0, 1e-6);

    const Complex d = green_tree_derivative(zz, ideal_parameters(zz, 10.0, 1e-9), 0.0);
    EXPECT_NEAR(d.real(), -0.5, 1e-6);
}

TEST(GreenTree, DerivativeMatchesFiniteDifferences) {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> depth_of(1, 5);
    std::uniform_real_distribution<double> gamma_of(0.02, 0.1);
    std::uniform_real_distribution<double> energy_of(-0.5, 0.5);
    for (int trial = 0; trial < 100; ++trial) {
        const int depth = depth_of(rng);
        const TreeSpec tree =
            build_tree(depth, std::span<const Bit>(test::random_bits(1 << depth, rng)));
        const DotParameters p = test::disordered(tree, 10.0, gamma_of(rng), 0.1, rng());
        const double e = energy_of(rng);
        const double h = 1e-4;
        auto g = [&](double x) { return green_tree(tree, p, x).value; };
        // Fourth-order central stencil.
        const Complex fd = (g(e - 2 * h) - 8.0 * g(e - h) + 8.0 * g(e + h) - g(e + 2 * h)) /
                           (12.0 * h);
        const Complex an = green_tree_derivative(tree, p, e);
        EXPECT_LE(std::abs(an - fd), 1e-6 * std::abs(an)) << "trial " << trial;
    }
}

TEST(GreenTree, SubtreeRootMatchesWholeTree) {
    const TreeSpec tree = build_tree(3, "10110010");
    const DotParameters p = test::disordered(tree, 10.0, 0.01, 0.1, 4);
    const SubtreeGreens s = evaluate_subtrees(tree, p, 0.2);
    const Complex g = green_tree(tree, p, 0.2).value;
    EXPECT_NEAR(std::abs(s.value[1] - g), 0.0, 1e-13 * std::abs(g));
}

TEST(GreenTree, RejectsMismatchedParameters) {
    const TreeSpec a = build_tree(1, "00");
    const TreeSpec b = build_tree(2, "0000");
    EXPECT_THROW(evaluate_subtrees(b, ideal_parameters(a, 10.0, 1e-6), 0.0), StructuralError);
    EXPECT_THROW(classify(b, ideal_parameters(a, 10.0, 1e-6)), StructuralError);
}

TEST(Classify, DepthOneForms) {
    const auto form = [](const char* bits, double gamma) {
        const TreeSpec t = build_tree(1, bits);
        return classify(t, ideal_parameters(t, 10.0, gamma));
    };
    const LogicalForm zz = form("00", 1e-4);
    EXPECT_EQ(zz.bit, 1);
    EXPECT_NEAR(zz.alpha, 0.5, 0.025);
    EXPECT_NEAR(zz.beta, 0.5, 0.025);
    EXPECT_FALSE(zz.ambiguous);

    for (const char* bits : {"01", "10"}) {
        const LogicalForm zo = form(bits, 1e-4);
        EXPECT_EQ(zo.bit, 1);
        EXPECT_NEAR(zo.alpha, 1.0, 0.05);
        EXPECT_NEAR(zo.beta, 1.0, 0.05);
    }

    const LogicalForm oo = form("11", 1e-4);
    EXPECT_EQ(oo.bit, 0);
    EXPECT_NEAR(oo.alpha, 1.0, 0.05);
    EXPECT_NEAR(oo.beta, 1.0, 0.05);
}

TEST(Classify, AmbiguityBand) {
    EXPECT_TRUE(classify_value({0.0, -0.6}, {-1.0, 0.0}, 1e-3).ambiguous);
    EXPECT_TRUE(classify_value({0.0, -1.9}, {-1.0, 0.0}, 1e-3).ambiguous);
    EXPECT_FALSE(classify_value({0.0, -0.4}, {-1.0, 0.0}, 1e-3).ambiguous);
    EXPECT_FALSE(classify_value({0.0, -2.1}, {-1.0, 0.0}, 1e-3).ambiguous);
    EXPECT_EQ(classify_value({0.0, -0.9}, {}, 1e-3).bit, 1);
    EXPECT_EQ(classify_value({0.0, -1.1}, {}, 1e-3).bit, 0);
}

TEST(Classify, ExhaustiveLogicUpToSixteenInputs) {
    for (int depth = 1; depth <= 4; ++depth) {
        const int n = 1 << depth;
        int failures = 0;
        for (std::uint64_t v = 0; v < (std::uint64_t{1} << n); ++v) {
            const TreeSpec tree = build_tree(depth, std::span<const Bit>(test::bits_of(v, n)));
            const LogicalForm f = classify(tree, ideal_parameters(tree, 10.0, 1e-6));
            if (f.bit != eval_nand(tree) || f.ambiguous) {
                ++failures;
            }
        }
        EXPECT_EQ(failures, 0) << "depth " << depth;
    }
}

namespace {

// G of a synthetic "1"-form -(aE + i g b) or "0"-form 1/(aE + i g b).
Complex synthetic(int bit, double a, double b, double e, double gamma) {
    const Complex z(a * e, gamma * b);
    return bit == 1 ? -z : 1.0 / z;
}

} // namespace

TEST(GreenNode, NandMap) {
    const double gamma = 1e-6;
    const double e = 1e-4;
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> coef(0.5, 4.0);
    std::uniform_real_distribution<double> hop(0.8, 1.25);
    for (int trial = 0; trial < 200; ++trial) {
        const int bl = trial % 2;
        const int br = (trial / 2) % 2;
        const double al = coef(rng), betal = coef(rng), ar = coef(rng), betar = coef(rng);
        const double tl2 = std::pow(hop(rng), 2), tr2 = std::pow(hop(rng), 2);
        auto g = [&](double x) {
            return green_node(0.0, x, gamma, tl2, synthetic(bl, al, betal, x, gamma), tr2,
                              synthetic(br, ar, betar, x, gamma));
        };
        const Complex gp = g(e);
        const Complex gm = g(-e);
        if (bl == 1 && br == 1) {
            const double alpha = ((1.0 / gp) - (1.0 / gm)).real() / (2 * e);
            const double beta = (1.0 / g(0.0)).imag() / gamma;
            EXPECT_GT(std::abs(g(0.0)), 1.0);
            EXPECT_NEAR(alpha, 1 + tl2 * al + tr2 * ar, 0.01 * alpha);
            EXPECT_NEAR(beta, 1 + tl2 * betal + tr2 * betar, 0.01 * beta);
        } else if (bl == 0 && br == 0) {
            const double alpha = -(gp - gm).real() / (2 * e);
            EXPECT_LT(std::abs(g(0.0)), 1.0);
            EXPECT_NEAR(1.0 / alpha, tl2 / al + tr2 / ar, 0.01 / alpha);
        } else {
            const double a0 = bl == 0 ? al : ar;
            const double b0 = bl == 0 ? betal : betar;
            const double t2 = bl == 0 ? tl2 : tr2;
            const double alpha = -(gp - gm).real() / (2 * e);
            const double beta = -g(0.0).imag() / gamma;
            EXPECT_LT(std::abs(g(0.0)), 1.0);
            EXPECT_NEAR(alpha, a0 / t2, 0.01 * alpha);
            EXPECT_NEAR(beta, b0 / t2, 0.01 * beta);
        }
    }
}

TEST(WorstCase, TreeBlocks) {
    EXPECT_EQ(format_bits(worst_case_tree(2).input_bits), "1011");
    EXPECT_EQ(format_bits(worst_case_tree(4).input_bits), "1011101010111011");
    for (int depth = 1; depth <= 10; ++depth) {
        EXPECT_EQ(eval_nand(worst_case_tree(depth)), 1) << depth;
    }
}

TEST(WorstCase, ProfileGrowth) {
    const auto profile = worst_case_profile(8, 10.0, 1e-6);
    ASSERT_EQ(profile.size(), 4U);
    EXPECT_EQ(profile[0].level, 2);
    EXPECT_EQ(profile[0].form.bit, 1);
    for (std::size_t i = 1; i < profile.size(); ++i) {
        EXPECT_EQ(profile[i].form.bit, 1);
        if (profile[i - 1].level >= 6) {
            const double ratio = profile[i].form.alpha / profile[i - 1].form.alpha;
            EXPECT_GE(ratio, 1.8);
            EXPECT_LE(ratio, 2.2);
        }
    }
    for (const auto& entry : worst_case_profile(7, 10.0, 1e-6)) {
        EXPECT_TRUE(std::isfinite(entry.form.alpha));
        EXPECT_TRUE(std::isfinite(entry.form.beta));
    }
    EXPECT_THROW(worst_case_profile(15, 10.0, 1e-6), CapacityError);
}
