#include "rknn/affinity.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>
#include <vector>

namespace rknn {

Eigen::VectorXd local_scales(const NeighborTable& nt, int scale_k) {
    if (scale_k < 1 || scale_k > nt.k_max)
        throw std::invalid_argument("local_scales: require 1 <= scale_k <= k_max");
    Eigen::VectorXd sigma(nt.n());
    for (int i = 0; i < nt.n(); ++i) sigma[i] = nt.dists(i, scale_k - 1);
    return sigma;
}

std::vector<int> substitute_degenerate_scales(Eigen::VectorXd& scales, const NeighborTable& nt) {
    std::vector<int> degenerate;
    for (int i = 0; i < nt.n(); ++i) {
        if (scales[i] > 0.0) continue;
        degenerate.push_back(i);
        double smallest = 0.0;
        for (int j = 0; j < nt.k_max; ++j) {
            if (nt.dists(i, j) > 0.0) {
                smallest = nt.dists(i, j);
                break;
            }
        }
        scales[i] = smallest > 0.0 ? smallest : std::numeric_limits<double>::epsilon();
    }
    return degenerate;
}

AffinityMatrix build_affinity(const RefinedGraph& g, const Eigen::VectorXd& scales) {
    if (scales.size() != g.n) throw std::invalid_argument("build_affinity: scale vector length mismatch");
    for (int i = 0; i < g.n; ++i)
        if (!(scales[i] > 0.0)) throw std::invalid_argument("build_affinity: nonpositive local scale");

    AffinityMatrix a;
    a.n = g.n;
    a.local_scales = scales;
    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(2 * g.edges.size());
    for (const auto& e : g.edges) {
        const double w = std::exp(-(e.dist * e.dist) / (scales[e.i] * scales[e.j]));
        trips.emplace_back(e.i, e.j, w);
        trips.emplace_back(e.j, e.i, w);
    }
    a.entries.resize(g.n, g.n);
    a.entries.setFromTriplets(trips.begin(), trips.end());
    return a;
}

NormalizedOperator normalized_operator(const AffinityMatrix& a) {
    NormalizedOperator op;
    op.n = a.n;
    op.degrees = Eigen::VectorXd::Zero(a.n);
    for (int k = 0; k < a.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.entries, k); it; ++it)
            op.degrees[it.row()] += it.value();

    Eigen::VectorXd inv_sqrt(a.n);
    for (int i = 0; i < a.n; ++i)
        inv_sqrt[i] = op.degrees[i] > 0.0 ? 1.0 / std::sqrt(op.degrees[i]) : 0.0;

    std::vector<Eigen::Triplet<double>> trips;
    trips.reserve(static_cast<std::size_t>(a.entries.nonZeros()));
    for (int k = 0; k < a.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.entries, k); it; ++it)
            trips.emplace_back(it.row(), it.col(), it.value() * inv_sqrt[it.row()] * inv_sqrt[it.col()]);
    op.entries.resize(a.n, a.n);
    op.entries.setFromTriplets(trips.begin(), trips.end());
    return op;
}

void write_affinity_coordinates(const AffinityMatrix& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    out << std::setprecision(17);
    for (int k = 0; k < a.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.entries, k); it; ++it)
            if (it.row() < it.col()) out << it.row() << ' ' << it.col() << ' ' << it.value() << '\n';
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

}  // namespace rknn
