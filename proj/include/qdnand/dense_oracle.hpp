#pragma once

// Brute-force reference: the full tree Hamiltonian and a dense resolvent
// solve, with no use of the recursive structure.

#include "qdnand/model.hpp"

#include <Eigen/Dense>

#include <complex>

namespace qdnand {

/// Largest tree the oracle accepts (2047 dots).
inline constexpr int kOracleMaxDepth = 10;

struct HamiltonianMatrix {
    int dimension = 0;
    /// Row r holds dot id r + 1.
    Eigen::MatrixXcd entries;
};

/// H = sum_i eps_i |i><i| - t_c (|p><c| + |c><p|) over every parent/child link.
HamiltonianMatrix assemble(const TreeSpec& tree, const DotParameters& params);

/// <site| [(E + i gamma) I - H]^{-1} |site> by pivoted LU.
std::complex<double> green_direct(const HamiltonianMatrix& h, double energy, double gamma,
                                  int site);

} // namespace qdnand
