#pragma once

// Planar H-fractal placement of a dot tree, inverter chains, and device
// feasibility estimates.
//
// Coordinates are integers in units of the dot spacing a. The link into a
// node at height h (leaves at height 0) runs along x for odd h and along y
// for even h; its length is one more than the number of inverter dots on it.

#include "qdnand/model.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace qdnand {

inline constexpr int kLayoutMaxDepth = 14;

/// Inverters on the links into heights 2m+1 and 2m+2, for m >= 0:
/// 0, 2, 4, 10, 20, 38, 76, then doubling.
int fractal_inverter_count(int pair_index);

/// Inverters on the links from height-(h-1) children into a node at height h.
int fractal_inverters_at_height(int height);

/// (d + alpha, d + beta): d applications of the pair map (1 + alpha, 1 + beta).
std::pair<double, double> inverter_map(double alpha, double beta, int d);

struct LayoutDot {
    int id = 0;
    int x = 0;
    int y = 0;
};

struct DotRole {
    bool inverter = false;
    int level = 0; ///< height of the tree node, or of the link's child for inverters
    int node = 0;  ///< tree node the dot is, or sits above
};

struct LayoutGraph {
    int depth = 0;
    std::vector<LayoutDot> dots;              ///< index = dot id - 1
    std::vector<std::array<int, 2>> links;    ///< unordered pairs of dot ids
    std::vector<DotRole> roles;               ///< index = dot id - 1
    std::vector<int> tree_binding;            ///< tree node -> dot id, entry 0 unused
    int root_dot = 0;                         ///< dot coupled to the probe

    int width() const;
    int height() const;
    long long bounding_area() const { return static_cast<long long>(width()) * height(); }

    /// Inverter dots on the link above each tree node, by node.
    std::vector<int> chain_counts() const;
};

/// Places every dot of `tree` on the grid. Links into a height use the
/// fractal count unless the child subtrees would reach past their parent, in
/// which case the smallest even count that clears them is used (from depth 11
/// on for plain trees). NOT markers lengthen their link by one unit so the
/// chain becomes odd. Throws StructuralError if the result is not a valid
/// planar unit-link embedding.
LayoutGraph build_hfractal(const TreeSpec& tree);

/// Checks uniqueness of coordinates, unit link lengths and node degrees.
void check_layout(const LayoutGraph& layout);

/// Reads the chain lengths back off a layout into a tree evaluable by the
/// Green's function code.
TreeSpec expand_to_tree(const LayoutGraph& layout, const TreeSpec& tree);

/// Plain text, one dot per line: id x y role level node.
void write_layout(std::ostream& out, const LayoutGraph& layout);

struct WorstCase2d {
    int depth = 0;
    double alpha = 1.0;
    double beta = 1.0;
    double bound = 0.0; ///< n 2^{n/2}
    bool within_bound = false;
};

/// Iterates alpha_n = 2^{n/2} + 2 alpha_{n-2} from alpha_0 = beta_0 = 1.
WorstCase2d worst_case_2d(int depth);

/// hbar in ueV ns.
inline constexpr double kHbarMicroEvNs = 0.6582119569;

struct DeviceParameters {
    double gamma = 0.1;       ///< dephasing, ueV
    double t = 100.0;         ///< mean tunnel coupling, ueV
    double alpha_orb = 1000.0; ///< orbital level spacing, ueV
    double Gamma = 0.1;       ///< probe lead broadening, ueV
    double sigma_eps = 1.0;   ///< ueV
    double sigma_t = 1.0;     ///< ueV
    double kT = 2.0;          ///< ueV
    double spacing_nm = 100.0;
};

struct FeasibilityReport {
    long long n_max = 1;
    int log2_n = 0;
    double area_mm2 = 0.0;
    double eval_time_ns = 0.0;
    std::string limiting_factor;
};

FeasibilityReport feasibility(const DeviceParameters& device);

struct HybridTime {
    int k = 0;
    double hybrid_exponent = 0.0;    ///< 6.5 + 0.753 k
    double classical_exponent = 0.0; ///< 0.753 (13 + k)
    double hybrid = 0.0;
    double classical = 0.0;
};

HybridTime hybrid_time(int k);

} // namespace qdnand
