#pragma once

#include "qdnand/model.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace qdnand::test {

inline std::vector<Bit> random_bits(int count, std::mt19937_64& rng) {
    std::vector<Bit> bits(static_cast<std::size_t>(count));
    for (auto& b : bits) {
        b = static_cast<Bit>(rng() & 1U);
    }
    return bits;
}

inline std::vector<Bit> bits_of(std::uint64_t value, int count) {
    std::vector<Bit> bits(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        bits[static_cast<std::size_t>(i)] = static_cast<Bit>((value >> i) & 1U);
    }
    return bits;
}

inline DotParameters disordered(const TreeSpec& tree, double delta, double gamma, double sigma,
                                std::uint64_t seed) {
    DisorderSpec d;
    d.sigma_eps = sigma;
    d.sigma_t = sigma;
    d.seed = seed;
    return sample_disorder(tree, ideal_parameters(tree, delta, gamma), d);
}

} // namespace qdnand::test
