#include "qdnand/dense_oracle.hpp"

#include "qdnand/errors.hpp"

#include <cmath>
#include <limits>

namespace qdnand {

HamiltonianMatrix assemble(const TreeSpec& tree, const DotParameters& params) {
    if (tree.depth > kOracleMaxDepth) {
        throw CapacityError("dense oracle is capped at depth " + std::to_string(kOracleMaxDepth));
    }
    const Topology topo = make_topology(tree);
    check_compatible(topo, params);

    HamiltonianMatrix h;
    h.dimension = topo.dot_count;
    h.entries = Eigen::MatrixXcd::Zero(h.dimension, h.dimension);
    for (int id = 1; id <= topo.dot_count; ++id) {
        const auto k = static_cast<std::size_t>(id);
        h.entries(id - 1, id - 1) = params.epsilon[k];
        const int parent = topo.parent[k];
        if (parent > 0) {
            const double t = params.coupling[k];
            h.entries(parent - 1, id - 1) = -t;
            h.entries(id - 1, parent - 1) = -t;
        }
    }
    return h;
}

std::complex<double> green_direct(const HamiltonianMatrix& h, double energy, double gamma,
                                  int site) {
    if (site < 1 || site > h.dimension) {
        throw InputError("site " + std::to_string(site) + " outside the matrix");
    }
    const double g = std::max(gamma, kGammaFloor);
    const std::complex<double> z(energy, g);

    Eigen::MatrixXcd a = -h.entries;
    a.diagonal().array() += z;

    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond > std::numeric_limits<double>::epsilon())) {
        throw NumericalError("resolvent solve is singular to machine precision", rcond);
    }
    Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(h.dimension);
    rhs(site - 1) = 1.0;
    const Eigen::VectorXcd x = lu.solve(rhs);
    return x(site - 1);
}

} // namespace qdnand
