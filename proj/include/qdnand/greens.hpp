#pragma once

// Recursive Green's function of a dot tree.
//
// For a dot j with child subtrees l and r,
//   G_j(E)^{-1} = E + i gamma - eps_j - t_l^2 G_l(E) - t_r^2 G_r(E),
// truncated at the leaves by G(E) = 1/(E + i gamma - eps). The tree has no
// loops, so the recursion is exact: G_j is the (j, j) element of the
// resolvent of the subtree rooted at j in isolation.

#include "qdnand/kernels/kernels.hpp"
#include "qdnand/model.hpp"

#include <complex>
#include <span>
#include <vector>

namespace qdnand {

using Complex = std::complex<double>;

struct GreenValue {
    Complex value;
    double energy = 0.0;
    double gamma = 0.0;
};

/// Ambiguity band on |G(0)| for logical classification (units of t).
inline constexpr double kAmbiguousLow = 0.5;
inline constexpr double kAmbiguousHigh = 2.0;

GreenValue green_leaf(double epsilon, double energy, double gamma);

/// One step of the recursion for arbitrary child Green's functions.
Complex green_node(double epsilon, double energy, double gamma, double left_t2, Complex left,
                   double right_t2, Complex right);

/// Compiled form of one (tree, parameters) pair, reusable across energies.
class TreeEvaluator {
public:
    TreeEvaluator(const TreeSpec& tree, const DotParameters& params);

    Complex operator()(double energy) const;

    /// Root Green's function on a whole grid, through the active SIMD kernel.
    std::vector<Complex> evaluate(std::span<const double> energies) const;
    void evaluate(std::span<const double> energies, std::span<double> re,
                  std::span<double> im) const;

    const kernels::FlatTree& flat() const { return flat_; }
    double gamma() const { return gamma_; }

private:
    kernels::FlatTree flat_;
    double gamma_;
};

GreenValue green_tree(const TreeSpec& tree, const DotParameters& params, double energy);

std::vector<Complex> green_tree_batch(const TreeSpec& tree, const DotParameters& params,
                                      std::span<const double> energies);

/// dG/dE at the root, by the chain rule on the recursion:
///   G'_j = -G_j^2 (1 - t_l^2 G'_l - t_r^2 G'_r).
Complex green_tree_derivative(const TreeSpec& tree, const DotParameters& params, double energy);

/// G and dG/dE of every subtree, indexed by dot id.
struct SubtreeGreens {
    std::vector<Complex> value;
    std::vector<Complex> derivative;
};

SubtreeGreens evaluate_subtrees(const TreeSpec& tree, const DotParameters& params, double energy);

/// Classifies G near E = 0 as "1"-like -(alpha E + i gamma beta) or
/// "0"-like 1/(alpha E + i gamma beta) from G(0) and G'(0).
LogicalForm classify_value(Complex g0, Complex dg0, double gamma);

LogicalForm classify(const TreeSpec& tree, const DotParameters& params);

/// Tree built from nested 1011 blocks: P(k+2) = P Q P P and
/// Q(k+2) = P Q P Q over height-k blocks, so every P evaluates to 1.
/// Even depths start from single leaves, odd depths from the pairs
/// P(1) = 10 and Q(1) = 11.
TreeSpec worst_case_tree(int depth);

struct ProfileEntry {
    int level = 0; ///< height of the subtree above the leaves
    LogicalForm form;
};

/// Logical forms of the leftmost P-block at every level with the parity of
/// `depth`, from one evaluation of the ideal worst-case tree.
std::vector<ProfileEntry> worst_case_profile(int depth, double delta, double gamma);

} // namespace qdnand
