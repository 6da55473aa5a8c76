#pragma once

#include "rknn/affinity.hpp"
#include "rknn/dataset.hpp"
#include "rknn/eigensolver.hpp"
#include "rknn/knn_graph.hpp"
#include "rknn/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <set>
#include <utility>
#include <vector>

namespace testing {

inline Eigen::MatrixXd random_points(int n, int d, std::uint64_t seed, double lo = 0.0,
                                     double hi = 10.0) {
    rknn::Rng rng(seed);
    Eigen::MatrixXd pts(n, d);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < d; ++j) pts(i, j) = rng.uniform(lo, hi);
    return pts;
}

// O(N^2) exact k-nearest neighbors: sort all distances per point, ties by
// index. Plain accumulation loop, independent of the kd-tree path.
struct BruteNeighbors {
    std::vector<std::vector<int>> ids;
    std::vector<std::vector<double>> dists;
};

inline BruteNeighbors brute_force_knn(const Eigen::MatrixXd& pts, int k) {
    const int n = static_cast<int>(pts.rows());
    BruteNeighbors out;
    out.ids.resize(static_cast<std::size_t>(n));
    out.dists.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        std::vector<std::pair<double, int>> all;
        all.reserve(static_cast<std::size_t>(n - 1));
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            double sq = 0.0;
            for (int c = 0; c < pts.cols(); ++c) {
                const double diff = pts(i, c) - pts(j, c);
                sq += diff * diff;
            }
            all.emplace_back(sq, j);
        }
        std::sort(all.begin(), all.end());
        for (int j = 0; j < k; ++j) {
            out.ids[static_cast<std::size_t>(i)].push_back(all[static_cast<std::size_t>(j)].second);
            out.dists[static_cast<std::size_t>(i)].push_back(
                std::sqrt(all[static_cast<std::size_t>(j)].first));
        }
    }
    return out;
}

// Naive prefix statistics: direct loops per prefix, no running sums.
inline std::vector<double> naive_running_threshold(const std::vector<double>& row) {
    std::vector<double> out;
    for (std::size_t j = 1; j <= row.size(); ++j) {
        double mean = 0.0;
        for (std::size_t t = 0; t < j; ++t) mean += row[t];
        mean /= static_cast<double>(j);
        double var = 0.0;
        for (std::size_t t = 0; t < j; ++t) var += (row[t] - mean) * (row[t] - mean);
        var /= static_cast<double>(j);
        out.push_back(mean + std::sqrt(var));
    }
    return out;
}

// Straight-line reference of the whole graph refinement: brute-force
// neighbor table, literal threshold matrix, literal mutuality nulling.
// Returns undirected edges as (i, j) pairs with i < j.
inline std::set<std::pair<int, int>> reference_refined_edges(const Eigen::MatrixXd& pts, int k_max,
                                                             int baseline_n) {
    const int n = static_cast<int>(pts.rows());
    const BruteNeighbors nbrs = brute_force_knn(pts, k_max);

    // survive[i][j]: directed edge i -> ids[i][j] kept after thresholding.
    std::vector<std::vector<bool>> survive(static_cast<std::size_t>(n),
                                           std::vector<bool>(static_cast<std::size_t>(k_max), false));
    for (int i = 0; i < n; ++i) {
        const auto dm = naive_running_threshold(nbrs.dists[static_cast<std::size_t>(i)]);
        for (int j = 0; j < k_max; ++j)
            survive[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                dm[static_cast<std::size_t>(j)] <= dm[static_cast<std::size_t>(baseline_n - 1)];
    }

    auto directed = [&](int from, int to) {
        for (int j = 0; j < k_max; ++j)
            if (nbrs.ids[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)] == to)
                return static_cast<bool>(survive[static_cast<std::size_t>(from)][static_cast<std::size_t>(j)]);
        return false;
    };

    std::set<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k_max; ++j)
            if (survive[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]) {
                const int to = nbrs.ids[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                if (directed(to, i)) edges.insert({std::min(i, to), std::max(i, to)});
            }
    return edges;
}

// Ideal c-component operator: c cliques with uniform affinity, optionally
// coupled pairwise between their first vertices with a weak affinity. With
// coupling = 0 the components are exact; the all-pairs coupling pattern is
// block-symmetric, so the perturbed near-zero gamma values stay degenerate.
inline rknn::AffinityMatrix block_affinity(const std::vector<int>& block_sizes, double coupling) {
    int n = 0;
    for (int b : block_sizes) n += b;
    std::vector<Eigen::Triplet<double>> trips;
    std::vector<int> starts;
    int offset = 0;
    for (int b : block_sizes) {
        starts.push_back(offset);
        for (int i = 0; i < b; ++i)
            for (int j = i + 1; j < b; ++j) {
                trips.emplace_back(offset + i, offset + j, 1.0);
                trips.emplace_back(offset + j, offset + i, 1.0);
            }
        offset += b;
    }
    if (coupling > 0.0) {
        for (std::size_t a = 0; a < starts.size(); ++a)
            for (std::size_t b = a + 1; b < starts.size(); ++b) {
                trips.emplace_back(starts[a], starts[b], coupling);
                trips.emplace_back(starts[b], starts[a], coupling);
            }
    }
    rknn::AffinityMatrix aff;
    aff.n = n;
    aff.entries.resize(n, n);
    aff.entries.setFromTriplets(trips.begin(), trips.end());
    aff.local_scales = Eigen::VectorXd::Ones(n);
    return aff;
}

// Residual, orthonormality and eigenvalue-range checks for a decomposition.
struct EigenCheck {
    double max_residual = 0.0;
    double max_orthonormality_error = 0.0;
    double max_abs_value = 0.0;
};

inline EigenCheck check_eigensystem(const rknn::NormalizedOperator& op, const rknn::EigenSystem& es) {
    EigenCheck chk;
    for (int j = 0; j < es.m; ++j) {
        const Eigen::VectorXd r = op.entries * es.vectors.col(j) - es.values[j] * es.vectors.col(j);
        chk.max_residual = std::max(chk.max_residual, r.norm() / std::max(1.0, std::abs(es.values[j])));
        chk.max_abs_value = std::max(chk.max_abs_value, std::abs(es.values[j]));
    }
    const Eigen::MatrixXd gram = es.vectors.transpose() * es.vectors;
    chk.max_orthonormality_error =
        (gram - Eigen::MatrixXd::Identity(es.m, es.m)).cwiseAbs().maxCoeff();
    return chk;
}

}  // namespace testing
