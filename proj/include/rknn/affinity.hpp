#pragma once

#include "rknn/knn_graph.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace rknn {

/// Locally scaled affinities on the refined edge set:
/// A_ij = exp(-d(i,j)^2 / (sigma_i sigma_j)), zero off the edge set.
struct AffinityMatrix {
    int n = 0;
    Eigen::SparseMatrix<double> entries;  // symmetric, zero diagonal, values in (0,1]
    Eigen::VectorXd local_scales;
};

/// Symmetric normalized operator D^{-1/2} A D^{-1/2}; rows and columns of
/// zero-degree vertices are all zero.
struct NormalizedOperator {
    int n = 0;
    Eigen::SparseMatrix<double> entries;
    Eigen::VectorXd degrees;  // D_ii = sum_j A_ij
};

/// sigma_i = distance of point i to its scale_k-th nearest neighbor, read
/// from the pre-filter table (so it is defined even when adaptive_k[i] is
/// smaller). May be 0 when the point has scale_k coincident duplicates.
Eigen::VectorXd local_scales(const NeighborTable& nt, int scale_k = 7);

/// Replaces zero scales by the smallest positive distance in the point's
/// neighbor row, or machine epsilon when the whole row is zero. Returns the
/// indices that were substituted.
std::vector<int> substitute_degenerate_scales(Eigen::VectorXd& scales, const NeighborTable& nt);

/// Requires strictly positive scales.
AffinityMatrix build_affinity(const RefinedGraph& g, const Eigen::VectorXd& scales);

NormalizedOperator normalized_operator(const AffinityMatrix& a);

/// Coordinate-format dump "i j value", 17 significant digits, upper
/// triangle only.
void write_affinity_coordinates(const AffinityMatrix& a, const std::string& path);

}  // namespace rknn
