#pragma once

// Domain types shared by every module: logical trees, the physical dot
// network they compile to, per-dot parameters and disorder sampling.
//
// Energies are in units of the mean tunnel coupling t throughout.
//
// Node numbering: node 1 is the root (the dot the probe couples to),
// node i has children 2i and 2i+1, and bit b_i sits on leaf node i + N.
// Inverter dots on chains get ids after the tree nodes, see Topology.

#include <array>
#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qdnand {

inline constexpr double kGammaFloor = 1e-12;
inline constexpr double kDefaultCouplingFloor = 0.1;

using Bit = std::uint8_t;

struct TreeSpec {
    int depth = 1;
    std::vector<Bit> input_bits;
    /// Internal nodes whose output passes through an inline inverter.
    std::set<int> not_markers;
    /// Inverter dots on the link above each tree node, indexed by node.
    /// Empty means "one inverter for every NOT marker, none elsewhere".
    std::vector<int> chain_lengths;

    int leaf_count() const { return 1 << depth; }
    int node_count() const { return 2 * leaf_count() - 1; }
    bool is_leaf(int node) const { return node >= leaf_count(); }
    int leaf_node(int bit_index) const { return bit_index + leaf_count(); }
    int bit_index(int leaf) const { return leaf - leaf_count(); }
    bool has_not(int node) const { return not_markers.count(node) != 0; }
    int inverters_above(int node) const;
};

TreeSpec build_tree(int depth, std::span<const Bit> bits);
TreeSpec build_tree(int depth, std::string_view bits);

/// Returns a copy of `tree` carrying the given NOT markers (internal nodes only).
TreeSpec with_not_markers(TreeSpec tree, const std::set<int>& markers);

std::vector<Bit> parse_bits(std::string_view text);
std::string format_bits(std::span<const Bit> bits);

/// Physical dot network of a tree: tree nodes plus inverter chain dots.
///
/// Dot ids 1..node_count() are the tree nodes. Chain dots follow in order
/// of the tree node they sit above, bottom-most (closest to that node)
/// first. Dot 0 is reserved for the probe.
struct Topology {
    int tree_nodes = 0;
    int dot_count = 0;
    int root = 1; ///< dot coupled to the probe
    std::vector<int> order; ///< children before parents
    std::vector<std::array<int, 2>> children; ///< by dot id, -1 if absent
    std::vector<int> parent; ///< by dot id, 0 for the root
    std::vector<int> anchor; ///< tree node a dot belongs to (itself for tree nodes)

    int id_limit() const { return dot_count + 1; }
    bool is_inverter(int dot) const { return dot > tree_nodes; }
};

Topology make_topology(const TreeSpec& tree);

struct DotParameters {
    std::vector<double> epsilon;  ///< by dot id; entry 0 unused
    std::vector<double> coupling; ///< link to the parent dot, by dot id; root entry unused
    double delta = 10.0;
    double gamma = 1e-6;
};

struct DisorderSpec {
    double sigma_t = 0.0;
    double sigma_eps = 0.0;
    double mean_t = 1.0;
    std::uint64_t seed = 0;
    double coupling_floor = kDefaultCouplingFloor;

    void validate() const;
};

struct LogicalForm {
    int bit = 0;
    double alpha = 0.0;
    double beta = 0.0;
    bool ambiguous = false;
};

/// Leaf detuning for bit b_i: (-1)^i b_i delta.
double leaf_detuning(int bit_index, Bit bit, double delta);

DotParameters ideal_parameters(const TreeSpec& tree, double delta, double gamma);

DotParameters sample_disorder(const TreeSpec& tree, const DotParameters& ideal,
                              const DisorderSpec& disorder);

/// Throws StructuralError unless `params` has one entry per dot of `topo`.
void check_compatible(const Topology& topo, const DotParameters& params);

/// SplitMix64 finaliser; used to derive independent per-trial seeds.
std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index);

} // namespace qdnand
