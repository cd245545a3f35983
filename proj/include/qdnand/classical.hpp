#pragma once

#include "qdnand/model.hpp"

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace qdnand {

/// Largest input count oracle_expectation will enumerate.
inline constexpr int kExpectationMaxInputs = 20;

/// Probability of a 0 leaf at which i.i.d. inputs reproduce themselves
/// through a NAND level; short-circuiting is rarest there.
inline const double kCriticalZeroProbability = (3.0 - std::sqrt(5.0)) / 2.0;

struct QueryStats {
    Bit result = 0;
    int queries = 0;
    std::uint64_t seed = 0;
};

/// NAND-tree value; a NOT marker inverts the node's output.
Bit eval_nand(const TreeSpec& tree, std::span<const Bit> bits);
Bit eval_nand(const TreeSpec& tree);

/// Short-circuit evaluation visiting a uniformly random child first.
QueryStats eval_randomized(const TreeSpec& tree, std::span<const Bit> bits, std::uint64_t seed);

/// E[f(b)] for independent bits with P(b_i = 1) = probs[i], by enumeration.
double oracle_expectation(const TreeSpec& tree, std::span<const double> probs);

/// I.i.d. bits with P(b = 0) = p_zero.
std::vector<Bit> draw_bits(int count, double p_zero, std::uint64_t seed);

} // namespace qdnand
