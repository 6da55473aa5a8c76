#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace rknn {

/// Exact k-nearest-neighbor search over a static point set.
///
/// Median-split kd-tree, O(d N log N) construction. Queries return the exact
/// k nearest points under the lexicographic order (squared distance, point
/// index), so distance ties resolve to the smaller index regardless of
/// traversal order. No approximation anywhere.
class KdTree {
public:
    struct Neighbor {
        int index;
        double sq_dist;
    };

    explicit KdTree(const Eigen::MatrixXd& points, int leaf_size = 16);

    /// Exact k nearest neighbors of `query`, ascending (sq_dist, index).
    /// `exclude` removes one point id from consideration (typically the
    /// query point itself when it belongs to the indexed set).
    std::vector<Neighbor> knn(const Eigen::RowVectorXd& query, int k, int exclude = -1) const;

    int size() const { return static_cast<int>(points_.rows()); }

    // Point-distance evaluation counter, used by the complexity-guard test.
    // Not synchronized; meaningful for single-threaded measurement only.
    std::size_t distance_evaluations() const { return dist_evals_; }
    void reset_distance_evaluations() { dist_evals_ = 0; }

private:
    struct Node {
        // Bounding box of the points in this subtree.
        Eigen::VectorXd box_lo, box_hi;
        int left = -1, right = -1;   // children; -1 for leaf
        int begin = 0, end = 0;      // range into order_ (leaves)
        int split_dim = -1;
    };

    int build(int begin, int end);
    double sq_dist(const Eigen::RowVectorXd& query, int point) const;
    static double box_sq_dist(const Eigen::RowVectorXd& query, const Node& node);

    Eigen::MatrixXd points_;
    std::vector<int> order_;  // point ids, permuted so each node owns a contiguous range
    std::vector<Node> nodes_;
    int root_ = -1;
    int leaf_size_;
    mutable std::size_t dist_evals_ = 0;
};

}  // namespace rknn
