#include "qdnand/layout.hpp"

#include "qdnand/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <ostream>
#include <unordered_set>

namespace qdnand {

namespace {

constexpr std::array<int, 7> kPublishedCounts{0, 2, 4, 10, 20, 38, 76};

int node_height(int node, int depth) {
    int level = 0;
    while ((node >> (level + 1)) != 0) {
        ++level;
    }
    return depth - level;
}

// Unit step along the axis used by links into height h.
std::array<int, 2> axis_step(int height) {
    return height % 2 == 1 ? std::array<int, 2>{1, 0} : std::array<int, 2>{0, 1};
}

long long key(int x, int y) {
    return (static_cast<long long>(x) << 32) ^ static_cast<long long>(static_cast<unsigned>(y));
}

} // namespace

int fractal_inverter_count(int pair_index) {
    if (pair_index < 0) {
        throw InputError("pair index must be non-negative");
    }
    if (pair_index < static_cast<int>(kPublishedCounts.size())) {
        return kPublishedCounts[static_cast<std::size_t>(pair_index)];
    }
    int count = kPublishedCounts.back();
    for (int m = static_cast<int>(kPublishedCounts.size()); m <= pair_index; ++m) {
        count *= 2;
    }
    return count;
}

int fractal_inverters_at_height(int height) {
    if (height < 1) {
        throw InputError("links exist only into heights >= 1");
    }
    return fractal_inverter_count((height - 1) / 2);
}

std::pair<double, double> inverter_map(double alpha, double beta, int d) {
    if (d < 0) {
        throw InputError("inverter pair count must be non-negative");
    }
    for (int i = 0; i < d; ++i) {
        alpha += 1.0;
        beta += 1.0;
    }
    return {alpha, beta};
}

int LayoutGraph::width() const {
    if (dots.empty()) {
        return 0;
    }
    const auto [lo, hi] = std::minmax_element(
        dots.begin(), dots.end(), [](const LayoutDot& a, const LayoutDot& b) { return a.x < b.x; });
    return hi->x - lo->x + 1;
}

int LayoutGraph::height() const {
    if (dots.empty()) {
        return 0;
    }
    const auto [lo, hi] = std::minmax_element(
        dots.begin(), dots.end(), [](const LayoutDot& a, const LayoutDot& b) { return a.y < b.y; });
    return hi->y - lo->y + 1;
}

std::vector<int> LayoutGraph::chain_counts() const {
    std::vector<int> counts(tree_binding.size(), 0);
    for (const DotRole& r : roles) {
        if (r.inverter) {
            if (r.node < 1 || static_cast<std::size_t>(r.node) >= counts.size()) {
                throw StructuralError("inverter bound to unknown tree node " +
                                      std::to_string(r.node));
            }
            ++counts[static_cast<std::size_t>(r.node)];
        }
    }
    return counts;
}

LayoutGraph build_hfractal(const TreeSpec& tree) {
    if (tree.depth < 1 || tree.depth > kLayoutMaxDepth) {
        throw CapacityError("H-fractal layouts support depths 1.." +
                            std::to_string(kLayoutMaxDepth));
    }
    const int n_nodes = tree.node_count();

    // Per-height link counts: the published sequence, widened where the child
    // subtrees would otherwise reach past their parent.
    std::vector<std::array<int, 2>> extent(static_cast<std::size_t>(n_nodes + 1), {0, 0});
    std::vector<int> height_count(static_cast<std::size_t>(tree.depth + 1), 0);
    auto not_of = [&](int node) { return tree.has_not(node) ? 1 : 0; };
    for (int h = 1; h <= tree.depth; ++h) {
        const int axis = h % 2 == 1 ? 0 : 1;
        const int first = 1 << (tree.depth - h);
        int need = 0;
        for (int node = first; node < 2 * first; ++node) {
            for (int child : {2 * node, 2 * node + 1}) {
                need = std::max(need, extent[static_cast<std::size_t>(child)][axis] - not_of(child));
            }
        }
        const int count = std::max(fractal_inverters_at_height(h), need + need % 2);
        height_count[static_cast<std::size_t>(h)] = count;
        for (int node = first; node < 2 * first; ++node) {
            auto& e = extent[static_cast<std::size_t>(node)];
            for (int child : {2 * node, 2 * node + 1}) {
                const auto& c = extent[static_cast<std::size_t>(child)];
                e[axis] = std::max(e[axis], count + 1 + not_of(child) + c[axis]);
                e[1 - axis] = std::max(e[1 - axis], c[1 - axis]);
            }
        }
    }

    TreeSpec chained = tree;
    chained.chain_lengths.assign(static_cast<std::size_t>(n_nodes + 1), 0);
    for (int node = 1; node <= n_nodes; ++node) {
        int count = not_of(node);
        if (node > 1) {
            count += height_count[static_cast<std::size_t>(node_height(node, tree.depth) + 1)];
        }
        chained.chain_lengths[static_cast<std::size_t>(node)] = count;
    }
    const Topology topo = make_topology(chained);

    LayoutGraph g;
    g.depth = tree.depth;
    g.dots.resize(static_cast<std::size_t>(topo.dot_count));
    g.roles.resize(static_cast<std::size_t>(topo.dot_count));
    g.tree_binding.assign(static_cast<std::size_t>(n_nodes + 1), 0);

    auto place = [&](int id, int x, int y, DotRole role) {
        g.dots[static_cast<std::size_t>(id - 1)] = {id, x, y};
        g.roles[static_cast<std::size_t>(id - 1)] = role;
    };

    // Chain dots above `node`, bottom-most first, stepping from (x, y) by (dx, dy).
    auto place_chain = [&](int node, int x, int y, int dx, int dy) {
        const int level = node_height(node, tree.depth);
        int id = topo.parent[static_cast<std::size_t>(node)];
        for (int k = 1; k <= chained.chain_lengths[static_cast<std::size_t>(node)]; ++k) {
            place(id, x + k * dx, y + k * dy, {true, level, node});
            id = topo.parent[static_cast<std::size_t>(id)];
        }
    };

    std::vector<std::array<int, 2>> pos(static_cast<std::size_t>(n_nodes + 1));
    pos[1] = {0, 0};
    for (int node = 1; node <= n_nodes; ++node) {
        const auto [x, y] = pos[static_cast<std::size_t>(node)];
        const int h = node_height(node, tree.depth);
        place(node, x, y, {false, h, node});
        g.tree_binding[static_cast<std::size_t>(node)] = node;
        if (h == 0) {
            continue;
        }
        const auto step = axis_step(h);
        for (int side = 0; side < 2; ++side) {
            const int child = 2 * node + side;
            const int sign = side == 0 ? -1 : 1;
            const int length = chained.chain_lengths[static_cast<std::size_t>(child)] + 1;
            const int cx = x + sign * length * step[0];
            const int cy = y + sign * length * step[1];
            pos[static_cast<std::size_t>(child)] = {cx, cy};
            place_chain(child, cx, cy, -sign * step[0], -sign * step[1]);
        }
    }
    const auto up = axis_step(tree.depth + 1);
    place_chain(1, 0, 0, up[0], up[1]);
    g.root_dot = topo.root;

    for (int id = 1; id <= topo.dot_count; ++id) {
        const int parent = topo.parent[static_cast<std::size_t>(id)];
        if (parent > 0) {
            g.links.push_back({parent, id});
        }
    }
    check_layout(g);
    return g;
}

void check_layout(const LayoutGraph& layout) {
    const std::size_t n = layout.dots.size();
    if (layout.roles.size() != n) {
        throw StructuralError("layout has " + std::to_string(n) + " dots but " +
                              std::to_string(layout.roles.size()) + " roles");
    }
    std::unordered_set<long long> seen;
    seen.reserve(n);
    for (const LayoutDot& d : layout.dots) {
        if (!seen.insert(key(d.x, d.y)).second) {
            throw StructuralError("two dots share grid point (" + std::to_string(d.x) + ", " +
                                  std::to_string(d.y) + ")");
        }
    }

    std::vector<int> degree(n + 1, 0);
    for (const auto& [a, b] : layout.links) {
        if (a < 1 || b < 1 || static_cast<std::size_t>(a) > n || static_cast<std::size_t>(b) > n) {
            throw StructuralError("link refers to a missing dot");
        }
        const LayoutDot& p = layout.dots[static_cast<std::size_t>(a - 1)];
        const LayoutDot& q = layout.dots[static_cast<std::size_t>(b - 1)];
        if (std::abs(p.x - q.x) + std::abs(p.y - q.y) != 1) {
            throw StructuralError("link " + std::to_string(a) + "-" + std::to_string(b) +
                                  " is not one grid unit long");
        }
        ++degree[static_cast<std::size_t>(a)];
        ++degree[static_cast<std::size_t>(b)];
    }
    // The top-most dot also couples to the probe.
    if (layout.root_dot > 0 && static_cast<std::size_t>(layout.root_dot) <= n) {
        ++degree[static_cast<std::size_t>(layout.root_dot)];
    }
    for (std::size_t id = 1; id <= n; ++id) {
        const DotRole& r = layout.roles[id - 1];
        if (r.inverter ? degree[id] != 2 : degree[id] > 3) {
            throw StructuralError("dot " + std::to_string(id) + " has " +
                                  std::to_string(degree[id]) + " links");
        }
    }
}

TreeSpec expand_to_tree(const LayoutGraph& layout, const TreeSpec& tree) {
    if (layout.depth != tree.depth ||
        layout.tree_binding.size() != static_cast<std::size_t>(tree.node_count() + 1)) {
        throw StructuralError("layout was not built for a depth-" + std::to_string(tree.depth) +
                              " tree");
    }
    const std::vector<int> counts = layout.chain_counts();
    for (int node = 1; node <= tree.node_count(); ++node) {
        const int c = counts[static_cast<std::size_t>(node)];
        const bool odd = c % 2 == 1;
        if (odd && !tree.has_not(node)) {
            throw StructuralError("odd inverter chain (" + std::to_string(c) + ") above node " +
                                  std::to_string(node) + " without a NOT marker");
        }
        if (!odd && tree.has_not(node)) {
            throw StructuralError("NOT marker on node " + std::to_string(node) +
                                  " but its chain has even length " + std::to_string(c));
        }
    }
    TreeSpec out = tree;
    out.chain_lengths = counts;
    return out;
}

void write_layout(std::ostream& out, const LayoutGraph& layout) {
    out << "# id x y role level node\n";
    for (std::size_t i = 0; i < layout.dots.size(); ++i) {
        const LayoutDot& d = layout.dots[i];
        const DotRole& r = layout.roles[i];
        out << d.id << ' ' << d.x << ' ' << d.y << ' ' << (r.inverter ? "inverter" : "node") << ' '
            << r.level << ' ' << r.node << '\n';
    }
}

WorstCase2d worst_case_2d(int depth) {
    if (depth < 0 || depth > 40 || depth % 2 != 0) {
        throw InputError("worst_case_2d needs an even depth in 0..40, got " +
                         std::to_string(depth));
    }
    WorstCase2d w;
    w.depth = depth;
    for (int n = 2; n <= depth; n += 2) {
        const double scale = std::ldexp(1.0, n / 2);
        w.alpha = scale + 2.0 * w.alpha;
        w.beta = scale + 2.0 * w.beta;
    }
    w.bound = depth * std::ldexp(1.0, depth / 2);
    w.within_bound = w.alpha < w.bound && w.beta < w.bound;
    return w;
}

FeasibilityReport feasibility(const DeviceParameters& d) {
    const std::array<std::pair<const char*, double>, 8> fields{{
        {"gamma", d.gamma},
        {"t", d.t},
        {"alpha_orb", d.alpha_orb},
        {"Gamma", d.Gamma},
        {"sigma_eps", d.sigma_eps},
        {"sigma_t", d.sigma_t},
        {"kT", d.kT},
        {"spacing_nm", d.spacing_nm},
    }};
    for (const auto& [name, value] : fields) {
        if (!(value > 0.0) || !std::isfinite(value)) {
            throw InputError(std::string(name) + " must be positive");
        }
    }

    FeasibilityReport r;
    if (d.alpha_orb <= d.t) {
        r.limiting_factor = "orbital spacing";
    } else {
        double sigma = d.sigma_eps;
        r.limiting_factor = "detuning disorder";
        if (d.sigma_t > sigma) {
            sigma = d.sigma_t;
            r.limiting_factor = "coupling disorder";
        }
        if (d.gamma > sigma) {
            sigma = d.gamma;
            r.limiting_factor = "dephasing";
        }
        const double exponent = std::floor(2.0 * std::log2(d.t / sigma));
        r.log2_n = static_cast<int>(std::clamp(exponent, 0.0, 62.0));
    }
    r.n_max = 1LL << r.log2_n;
    const double a_mm = d.spacing_nm * 1e-6;
    r.area_mm2 = a_mm * a_mm * std::pow(3.0, r.log2_n);
    r.eval_time_ns = 10.0 * kHbarMicroEvNs / d.Gamma;
    return r;
}

HybridTime hybrid_time(int k) {
    if (k < 0) {
        throw InputError("hybrid_time needs k >= 0");
    }
    HybridTime h;
    h.k = k;
    h.hybrid_exponent = 6.5 + 0.753 * k;
    h.classical_exponent = 0.753 * (13 + k);
    h.hybrid = std::exp2(h.hybrid_exponent);
    h.classical = std::exp2(h.classical_exponent);
    return h;
}

} // namespace qdnand
