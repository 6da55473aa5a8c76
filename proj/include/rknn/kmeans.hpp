#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace rknn {

struct KMeansResult {
    std::vector<int> labels;    // length N, values in 0..k-1
    Eigen::MatrixXd centroids;  // k x d
    double inertia = 0.0;       // sum of squared point-to-centroid distances
    int iterations = 0;
};

/// Seeded Lloyd k-means with k-means++ initialization.
///
/// All randomness comes from `seed`; assignment ties go to the lowest
/// centroid index; empty clusters are repaired by promoting the point
/// farthest from its assigned centroid. Stops when the largest centroid
/// movement drops to `tol` or after `max_iter` iterations. Every cluster in
/// the result is non-empty.
KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter = 100,
                    double tol = 1e-6);

}  // namespace rknn
