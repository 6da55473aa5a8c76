#include "rknn/kdtree.hpp"

#include <algorithm>
#include <stdexcept>

namespace rknn {

namespace {

// Lexicographic (sq_dist, index): true when a beats b. Used as the heap
// comparator so the heap front is the worst of the current k best.
inline bool better(const KdTree::Neighbor& a, const KdTree::Neighbor& b) {
    return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
}

}  // namespace

KdTree::KdTree(const Eigen::MatrixXd& points, int leaf_size)
    : points_(points), leaf_size_(std::max(leaf_size, 1)) {
    if (points_.rows() < 1) throw std::invalid_argument("KdTree: empty point set");
    order_.resize(static_cast<std::size_t>(points_.rows()));
    for (int i = 0; i < size(); ++i) order_[static_cast<std::size_t>(i)] = i;
    nodes_.reserve(static_cast<std::size_t>(2 * size() / leaf_size_ + 2));
    root_ = build(0, size());
}

int KdTree::build(int begin, int end) {
    Node node;
    node.begin = begin;
    node.end = end;
    node.box_lo = points_.row(order_[static_cast<std::size_t>(begin)]).transpose();
    node.box_hi = node.box_lo;
    for (int i = begin + 1; i < end; ++i) {
        const auto row = points_.row(order_[static_cast<std::size_t>(i)]);
        node.box_lo = node.box_lo.cwiseMin(row.transpose());
        node.box_hi = node.box_hi.cwiseMax(row.transpose());
    }

    if (end - begin <= leaf_size_) {
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size()) - 1;
    }

    // Split along the widest box dimension at the median point.
    int dim = 0;
    (node.box_hi - node.box_lo).maxCoeff(&dim);
    if (node.box_hi[dim] == node.box_lo[dim]) {
        // All points coincide; keep them in one leaf.
        nodes_.push_back(std::move(node));
        return static_cast<int>(nodes_.size()) - 1;
    }
    node.split_dim = dim;

    const int mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [this, dim](int a, int b) {
                         const double va = points_(a, dim), vb = points_(b, dim);
                         return va < vb || (va == vb && a < b);
                     });

    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(std::move(node));
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[static_cast<std::size_t>(self)].left = left;
    nodes_[static_cast<std::size_t>(self)].right = right;
    return self;
}

double KdTree::sq_dist(const Eigen::RowVectorXd& query, int point) const {
    ++dist_evals_;
    double s = 0.0;
    for (int j = 0; j < points_.cols(); ++j) {
        const double diff = query[j] - points_(point, j);
        s += diff * diff;
    }
    return s;
}

double KdTree::box_sq_dist(const Eigen::RowVectorXd& query, const Node& node) {
    double s = 0.0;
    for (int j = 0; j < node.box_lo.size(); ++j) {
        double diff = 0.0;
        if (query[j] < node.box_lo[j])
            diff = node.box_lo[j] - query[j];
        else if (query[j] > node.box_hi[j])
            diff = query[j] - node.box_hi[j];
        s += diff * diff;
    }
    return s;
}

std::vector<KdTree::Neighbor> KdTree::knn(const Eigen::RowVectorXd& query, int k, int exclude) const {
    if (k < 1) throw std::invalid_argument("KdTree::knn: k must be >= 1");
    const int available = size() - (exclude >= 0 && exclude < size() ? 1 : 0);
    if (k > available) throw std::invalid_argument("KdTree::knn: k exceeds available points");
    if (query.size() != points_.cols()) throw std::invalid_argument("KdTree::knn: dimension mismatch");

    // Max-heap of the current k best; top is the worst of them.
    std::vector<Neighbor> heap;
    heap.reserve(static_cast<std::size_t>(k));

    // Iterative depth-first descent, near child first. A subtree is visited
    // only while its box could still beat the current worst; equality must
    // descend because an equidistant point with a smaller index wins a tie.
    std::vector<int> stack;
    stack.push_back(root_);
    while (!stack.empty()) {
        const Node& node = nodes_[static_cast<std::size_t>(stack.back())];
        stack.pop_back();
        if (static_cast<int>(heap.size()) == k && box_sq_dist(query, node) > heap.front().sq_dist)
            continue;

        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const int p = order_[static_cast<std::size_t>(i)];
                if (p == exclude) continue;
                const Neighbor cand{p, sq_dist(query, p)};
                if (static_cast<int>(heap.size()) < k) {
                    heap.push_back(cand);
                    std::push_heap(heap.begin(), heap.end(), better);
                } else if (better(cand, heap.front())) {
                    std::pop_heap(heap.begin(), heap.end(), better);
                    heap.back() = cand;
                    std::push_heap(heap.begin(), heap.end(), better);
                }
            }
            continue;
        }

        const Node& lnode = nodes_[static_cast<std::size_t>(node.left)];
        const bool left_first = query[node.split_dim] <= lnode.box_hi[node.split_dim];
        // Push the far child first so the near child is processed first.
        stack.push_back(left_first ? node.right : node.left);
        stack.push_back(left_first ? node.left : node.right);
    }

    std::sort(heap.begin(), heap.end(), better);
    return heap;
}

}  // namespace rknn
