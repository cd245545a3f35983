#include "qdnand/greens.hpp"

#include "qdnand/errors.hpp"

#include <cmath>

namespace qdnand {

namespace {

// Same operation order as the kernels, so single-point and batched paths agree exactly.
inline Complex invert(double re, double im) {
    const double norm = re * re + im * im;
    return {re / norm, -im / norm};
}

kernels::FlatTree flatten(const Topology& topo, const DotParameters& params) {
    check_compatible(topo, params);
    const std::size_t n = topo.order.size();
    std::vector<std::int32_t> position(static_cast<std::size_t>(topo.id_limit()), -1);
    for (std::size_t pos = 0; pos < n; ++pos) {
        position[static_cast<std::size_t>(topo.order[pos])] = static_cast<std::int32_t>(pos);
    }

    kernels::FlatTree flat;
    flat.epsilon.resize(n);
    flat.left.assign(n, -1);
    flat.right.assign(n, -1);
    flat.left_t2.assign(n, 0.0);
    flat.right_t2.assign(n, 0.0);
    for (std::size_t pos = 0; pos < n; ++pos) {
        const int id = topo.order[pos];
        flat.epsilon[pos] = params.epsilon[static_cast<std::size_t>(id)];
        const auto& kids = topo.children[static_cast<std::size_t>(id)];
        if (kids[0] >= 0) {
            const double t = params.coupling[static_cast<std::size_t>(kids[0])];
            flat.left[pos] = position[static_cast<std::size_t>(kids[0])];
            flat.left_t2[pos] = t * t;
        }
        if (kids[1] >= 0) {
            const double t = params.coupling[static_cast<std::size_t>(kids[1])];
            flat.right[pos] = position[static_cast<std::size_t>(kids[1])];
            flat.right_t2[pos] = t * t;
        }
    }
    return flat;
}

void append_blocks(std::vector<Bit>& out, const std::vector<Bit>& a, const std::vector<Bit>& b,
                   const std::vector<Bit>& c, const std::vector<Bit>& d) {
    for (const auto* part : {&a, &b, &c, &d}) {
        out.insert(out.end(), part->begin(), part->end());
    }
}

} // namespace

GreenValue green_leaf(double epsilon, double energy, double gamma) {
    const double g = std::max(gamma, kGammaFloor);
    return {invert(energy - epsilon, g), energy, g};
}

Complex green_node(double epsilon, double energy, double gamma, double left_t2, Complex left,
                   double right_t2, Complex right) {
    double re = energy - epsilon;
    double im = std::max(gamma, kGammaFloor);
    re = re - left_t2 * left.real();
    im = im - left_t2 * left.imag();
    re = re - right_t2 * right.real();
    im = im - right_t2 * right.imag();
    return invert(re, im);
}

TreeEvaluator::TreeEvaluator(const TreeSpec& tree, const DotParameters& params)
    : flat_(flatten(make_topology(tree), params)), gamma_(std::max(params.gamma, kGammaFloor)) {}

Complex TreeEvaluator::operator()(double energy) const {
    double re = 0.0;
    double im = 0.0;
    kernels::active_kernels().green_roots(flat_, &energy, 1, gamma_, &re, &im);
    return {re, im};
}

std::vector<Complex> TreeEvaluator::evaluate(std::span<const double> energies) const {
    std::vector<double> re(energies.size());
    std::vector<double> im(energies.size());
    evaluate(energies, re, im);
    std::vector<Complex> out(energies.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = {re[i], im[i]};
    }
    return out;
}

void TreeEvaluator::evaluate(std::span<const double> energies, std::span<double> re,
                             std::span<double> im) const {
    if (re.size() < energies.size() || im.size() < energies.size()) {
        throw InputError("output spans shorter than the energy grid");
    }
    if (energies.empty()) {
        return;
    }
    kernels::active_kernels().green_roots(flat_, energies.data(), energies.size(), gamma_,
                                          re.data(), im.data());
}

GreenValue green_tree(const TreeSpec& tree, const DotParameters& params, double energy) {
    const TreeEvaluator eval(tree, params);
    return {eval(energy), energy, params.gamma};
}

std::vector<Complex> green_tree_batch(const TreeSpec& tree, const DotParameters& params,
                                      std::span<const double> energies) {
    return TreeEvaluator(tree, params).evaluate(energies);
}

SubtreeGreens evaluate_subtrees(const TreeSpec& tree, const DotParameters& params,
                                double energy) {
    const Topology topo = make_topology(tree);
    check_compatible(topo, params);

    const auto limit = static_cast<std::size_t>(topo.id_limit());
    SubtreeGreens out;
    out.value.assign(limit, Complex{});
    out.derivative.assign(limit, Complex{});

    const double gamma = std::max(params.gamma, kGammaFloor);
    for (int id : topo.order) {
        const auto k = static_cast<std::size_t>(id);
        double re = energy - params.epsilon[k];
        double im = gamma;
        Complex slope_sum{0.0, 0.0};
        for (int child : topo.children[k]) {
            if (child < 0) {
                continue;
            }
            const auto c = static_cast<std::size_t>(child);
            const double t2 = params.coupling[c] * params.coupling[c];
            re = re - t2 * out.value[c].real();
            im = im - t2 * out.value[c].imag();
            slope_sum += t2 * out.derivative[c];
        }
        const Complex g = invert(re, im);
        out.value[k] = g;
        out.derivative[k] = -g * g * (1.0 - slope_sum);
    }
    return out;
}

Complex green_tree_derivative(const TreeSpec& tree, const DotParameters& params, double energy) {
    const Topology topo = make_topology(tree);
    const SubtreeGreens all = evaluate_subtrees(tree, params, energy);
    return all.derivative[static_cast<std::size_t>(topo.root)];
}

LogicalForm classify_value(Complex g0, Complex dg0, double gamma) {
    LogicalForm form;
    const double magnitude = std::abs(g0);
    form.ambiguous = magnitude >= kAmbiguousLow && magnitude <= kAmbiguousHigh;
    if (magnitude < 1.0) {
        form.bit = 1;
        form.alpha = -dg0.real();
        form.beta = -g0.imag() / gamma;
    } else {
        // d(1/G)/dE = -G'/G^2
        const Complex inv = 1.0 / g0;
        const Complex inv_slope = -dg0 * inv * inv;
        form.bit = 0;
        form.alpha = inv_slope.real();
        form.beta = inv.imag() / gamma;
    }
    return form;
}

LogicalForm classify(const TreeSpec& tree, const DotParameters& params) {
    const Topology topo = make_topology(tree);
    const SubtreeGreens all = evaluate_subtrees(tree, params, 0.0);
    const auto root = static_cast<std::size_t>(topo.root);
    return classify_value(all.value[root], all.derivative[root],
                          std::max(params.gamma, kGammaFloor));
}

TreeSpec worst_case_tree(int depth) {
    if (depth < 1) {
        throw InputError("worst-case tree depth must be >= 1");
    }
    std::vector<Bit> p;
    std::vector<Bit> q;
    int height = 0;
    if (depth % 2 == 0) {
        p = {1};
        q = {0};
    } else {
        p = {1, 0};
        q = {1, 1};
        height = 1;
    }
    while (height < depth) {
        std::vector<Bit> next_p;
        std::vector<Bit> next_q;
        append_blocks(next_p, p, q, p, p);
        append_blocks(next_q, p, q, p, q);
        p = std::move(next_p);
        q = std::move(next_q);
        height += 2;
    }
    return build_tree(depth, std::span<const Bit>(p));
}

std::vector<ProfileEntry> worst_case_profile(int depth, double delta, double gamma) {
    if (depth > 14) {
        throw CapacityError("worst_case_profile supports depth <= 14");
    }
    const TreeSpec tree = worst_case_tree(depth);
    const DotParameters params = ideal_parameters(tree, delta, gamma);
    const SubtreeGreens all = evaluate_subtrees(tree, params, 0.0);

    std::vector<ProfileEntry> profile;
    for (int level = (depth % 2 == 0) ? 2 : 1; level <= depth; level += 2) {
        const auto node = static_cast<std::size_t>(1) << (depth - level);
        profile.push_back({level, classify_value(all.value[node], all.derivative[node],
                                                 params.gamma)});
    }
    return profile;
}

} // namespace qdnand
