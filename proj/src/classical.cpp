#include "qdnand/classical.hpp"

#include "qdnand/errors.hpp"

#include <random>

namespace qdnand {

namespace {

void check_bits(const TreeSpec& tree, std::span<const Bit> bits) {
    if (bits.size() != static_cast<std::size_t>(tree.leaf_count())) {
        throw InputError("tree has " + std::to_string(tree.leaf_count()) + " leaves, got " +
                         std::to_string(bits.size()) + " bits");
    }
}

struct RandomizedEvaluator {
    const TreeSpec& tree;
    std::span<const Bit> bits;
    std::mt19937_64 rng;
    int queries = 0;

    Bit visit(int node) {
        if (tree.is_leaf(node)) {
            ++queries;
            return bits[static_cast<std::size_t>(tree.bit_index(node))];
        }
        const int first = 2 * node + static_cast<int>(rng() & 1U);
        const int second = (first ^ 1);
        Bit value = 1;
        if (visit(first) != 0) {
            value = visit(second) == 0 ? 1 : 0;
        }
        return tree.has_not(node) ? static_cast<Bit>(1 - value) : value;
    }
};

} // namespace

Bit eval_nand(const TreeSpec& tree, std::span<const Bit> bits) {
    check_bits(tree, bits);
    const int n = tree.leaf_count();
    std::vector<Bit> value(static_cast<std::size_t>(2 * n));
    for (int i = 0; i < n; ++i) {
        value[static_cast<std::size_t>(n + i)] = bits[static_cast<std::size_t>(i)];
    }
    for (int node = n - 1; node >= 1; --node) {
        const auto k = static_cast<std::size_t>(node);
        Bit v = (value[2 * k] & value[2 * k + 1]) ? 0 : 1;
        if (tree.has_not(node)) {
            v = static_cast<Bit>(1 - v);
        }
        value[k] = v;
    }
    return value[1];
}

Bit eval_nand(const TreeSpec& tree) {
    return eval_nand(tree, tree.input_bits);
}

QueryStats eval_randomized(const TreeSpec& tree, std::span<const Bit> bits, std::uint64_t seed) {
    check_bits(tree, bits);
    RandomizedEvaluator ev{tree, bits, std::mt19937_64(seed)};
    const Bit result = ev.visit(1);
    return {result, ev.queries, seed};
}

double oracle_expectation(const TreeSpec& tree, std::span<const double> probs) {
    const int n = tree.leaf_count();
    if (n > kExpectationMaxInputs) {
        throw CapacityError("oracle_expectation enumerates at most " +
                            std::to_string(kExpectationMaxInputs) + " inputs, tree has " +
                            std::to_string(n));
    }
    if (probs.size() != static_cast<std::size_t>(n)) {
        throw InputError("need one probability per input");
    }
    for (double p : probs) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw InputError("probabilities must lie in [0, 1]");
        }
    }

    std::vector<Bit> bits(static_cast<std::size_t>(n));
    double expectation = 0.0;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        double weight = 1.0;
        for (int i = 0; i < n; ++i) {
            const bool one = ((mask >> i) & 1U) != 0;
            bits[static_cast<std::size_t>(i)] = one ? 1 : 0;
            const double p = probs[static_cast<std::size_t>(i)];
            weight *= one ? p : 1.0 - p;
        }
        if (weight != 0.0 && eval_nand(tree, bits) != 0) {
            expectation += weight;
        }
    }
    return expectation;
}

std::vector<Bit> draw_bits(int count, double p_zero, std::uint64_t seed) {
    if (!(p_zero >= 0.0 && p_zero <= 1.0)) {
        throw InputError("p_zero must lie in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Bit> bits(static_cast<std::size_t>(count));
    for (auto& b : bits) {
        b = u(rng) < p_zero ? 0 : 1;
    }
    return bits;
}

} // namespace qdnand
