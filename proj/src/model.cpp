#include "qdnand/model.hpp"

#include "qdnand/errors.hpp"

#include <cmath>
#include <random>

namespace qdnand {

namespace {

constexpr int kMaxDepth = 24;

void check_depth(int depth) {
    if (depth < 1) {
        throw InputError("tree depth must be >= 1, got " + std::to_string(depth));
    }
    if (depth > kMaxDepth) {
        throw CapacityError("tree depth " + std::to_string(depth) + " exceeds limit " +
                            std::to_string(kMaxDepth));
    }
}

} // namespace

int TreeSpec::inverters_above(int node) const {
    if (chain_lengths.empty()) {
        return has_not(node) ? 1 : 0;
    }
    return chain_lengths[static_cast<std::size_t>(node)];
}

TreeSpec build_tree(int depth, std::span<const Bit> bits) {
    check_depth(depth);
    const std::size_t expected = std::size_t{1} << depth;
    if (bits.size() != expected) {
        throw InputError("depth " + std::to_string(depth) + " needs " + std::to_string(expected) +
                         " input bits, got " + std::to_string(bits.size()));
    }
    TreeSpec tree;
    tree.depth = depth;
    tree.input_bits.reserve(bits.size());
    for (Bit b : bits) {
        if (b > 1) {
            throw InputError("input bits must be 0 or 1");
        }
        tree.input_bits.push_back(b);
    }
    return tree;
}

TreeSpec build_tree(int depth, std::string_view bits) {
    const auto parsed = parse_bits(bits);
    return build_tree(depth, std::span<const Bit>(parsed));
}

TreeSpec with_not_markers(TreeSpec tree, const std::set<int>& markers) {
    for (int node : markers) {
        if (node < 1 || node >= tree.leaf_count()) {
            throw InputError("NOT marker " + std::to_string(node) +
                             " is not an internal node (valid range 1.." +
                             std::to_string(tree.leaf_count() - 1) + ")");
        }
    }
    tree.not_markers = markers;
    return tree;
}

std::vector<Bit> parse_bits(std::string_view text) {
    std::vector<Bit> bits;
    bits.reserve(text.size());
    for (char c : text) {
        if (c == '0' || c == '1') {
            bits.push_back(static_cast<Bit>(c - '0'));
        } else {
            throw InputError(std::string("invalid bit character '") + c + "'");
        }
    }
    return bits;
}

std::string format_bits(std::span<const Bit> bits) {
    std::string s;
    s.reserve(bits.size());
    for (Bit b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

Topology make_topology(const TreeSpec& tree) {
    const int n_leaves = tree.leaf_count();
    const int n_nodes = tree.node_count();
    if (!tree.chain_lengths.empty() &&
        tree.chain_lengths.size() != static_cast<std::size_t>(n_nodes + 1)) {
        throw StructuralError("chain_lengths must have one entry per tree node plus index 0");
    }

    Topology topo;
    topo.tree_nodes = n_nodes;

    // Assign chain dot ids: chains ordered by the node they sit above.
    std::vector<int> chain_start(static_cast<std::size_t>(n_nodes + 1), 0);
    int next_id = n_nodes + 1;
    for (int node = 1; node <= n_nodes; ++node) {
        const int len = tree.inverters_above(node);
        if (len < 0) {
            throw StructuralError("negative chain length above node " + std::to_string(node));
        }
        chain_start[static_cast<std::size_t>(node)] = next_id;
        next_id += len;
    }
    topo.dot_count = next_id - 1;

    const auto limit = static_cast<std::size_t>(topo.id_limit());
    topo.children.assign(limit, {-1, -1});
    topo.parent.assign(limit, 0);
    topo.anchor.assign(limit, 0);
    topo.order.reserve(static_cast<std::size_t>(topo.dot_count));

    // Top-most dot of the structure hanging below a node's parent.
    auto top_of = [&](int node) {
        const int len = tree.inverters_above(node);
        return len == 0 ? node : chain_start[static_cast<std::size_t>(node)] + len - 1;
    };

    for (int node = n_nodes; node >= 1; --node) {
        auto& own = topo.children[static_cast<std::size_t>(node)];
        if (node < n_leaves) {
            own = {top_of(2 * node), top_of(2 * node + 1)};
        }
        topo.anchor[static_cast<std::size_t>(node)] = node;
        topo.order.push_back(node);

        int below = node;
        const int len = tree.inverters_above(node);
        for (int k = 0; k < len; ++k) {
            const int id = chain_start[static_cast<std::size_t>(node)] + k;
            topo.children[static_cast<std::size_t>(id)] = {below, -1};
            topo.anchor[static_cast<std::size_t>(id)] = node;
            topo.parent[static_cast<std::size_t>(below)] = id;
            topo.order.push_back(id);
            below = id;
        }
        if (node > 1) {
            topo.parent[static_cast<std::size_t>(below)] = node / 2;
        }
    }
    topo.root = top_of(1);
    return topo;
}

void DisorderSpec::validate() const {
    if (!(sigma_t >= 0.0) || !(sigma_eps >= 0.0)) {
        throw InputError("disorder widths must be non-negative");
    }
    if (!(mean_t > 0.0) || !(sigma_t < mean_t)) {
        throw InputError("sigma_t must be smaller than the mean coupling");
    }
    if (!(coupling_floor > 0.0)) {
        throw InputError("coupling floor must be positive");
    }
}

double leaf_detuning(int bit_index, Bit bit, double delta) {
    if (bit == 0) {
        return 0.0;
    }
    return (bit_index % 2 == 0) ? delta : -delta;
}

DotParameters ideal_parameters(const TreeSpec& tree, double delta, double gamma) {
    if (!(delta > 0.0)) {
        throw InputError("oracle coupling delta must be positive");
    }
    if (!(gamma >= 0.0)) {
        throw InputError("dephasing gamma must be non-negative");
    }
    const Topology topo = make_topology(tree);
    const auto limit = static_cast<std::size_t>(topo.id_limit());

    DotParameters p;
    p.delta = delta;
    p.gamma = std::max(gamma, kGammaFloor);
    p.epsilon.assign(limit, 0.0);
    p.coupling.assign(limit, 1.0);
    for (int i = 0; i < tree.leaf_count(); ++i) {
        p.epsilon[static_cast<std::size_t>(tree.leaf_node(i))] =
            leaf_detuning(i, tree.input_bits[static_cast<std::size_t>(i)], delta);
    }
    return p;
}

DotParameters sample_disorder(const TreeSpec& tree, const DotParameters& ideal,
                              const DisorderSpec& disorder) {
    disorder.validate();
    const Topology topo = make_topology(tree);
    check_compatible(topo, ideal);

    std::mt19937_64 rng(disorder.seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    DotParameters out = ideal;
    // Two draws per dot, always taken, so the stream does not depend on the widths.
    for (int id = 1; id <= topo.dot_count; ++id) {
        const double z_eps = normal(rng);
        const double z_t = normal(rng);
        const auto k = static_cast<std::size_t>(id);
        out.epsilon[k] = ideal.epsilon[k] + disorder.sigma_eps * z_eps;
        if (id != topo.root) {
            const double t = ideal.coupling[k] * disorder.mean_t + disorder.sigma_t * z_t;
            out.coupling[k] = std::max(t, disorder.coupling_floor);
        }
    }
    return out;
}

void check_compatible(const Topology& topo, const DotParameters& params) {
    const auto limit = static_cast<std::size_t>(topo.id_limit());
    if (params.epsilon.size() != limit || params.coupling.size() != limit) {
        throw StructuralError("parameters cover " + std::to_string(params.epsilon.size()) +
                              " dot ids but the tree has " + std::to_string(limit));
    }
    if (!(params.gamma >= kGammaFloor)) {
        throw InputError("gamma below the floor");
    }
}

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t z = base ^ (index * 0x9E3779B97F4A7C15ULL);
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

} // namespace qdnand
