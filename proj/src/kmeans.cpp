#include "rknn/kmeans.hpp"

#include "rknn/rng.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rknn {

namespace {

Eigen::MatrixXd plus_plus_seeding(const Eigen::MatrixXd& points, int k, Rng& rng) {
    const int n = static_cast<int>(points.rows());
    Eigen::MatrixXd centroids(k, points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.uniform_index(static_cast<std::size_t>(n))));

    Eigen::VectorXd sq_dist(n);
    for (int i = 0; i < n; ++i) sq_dist[i] = (points.row(i) - centroids.row(0)).squaredNorm();

    for (int c = 1; c < k; ++c) {
        const double total = sq_dist.sum();
        int chosen;
        if (total > 0.0) {
            // Distance-squared weighted draw.
            const double target = rng.uniform01() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (int i = 0; i < n; ++i) {
                acc += sq_dist[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            // All remaining mass is zero (duplicate-heavy input); fall back
            // to a uniform draw so seeding still completes deterministically.
            chosen = static_cast<int>(rng.uniform_index(static_cast<std::size_t>(n)));
        }
        centroids.row(c) = points.row(chosen);
        for (int i = 0; i < n; ++i)
            sq_dist[i] = std::min(sq_dist[i], (points.row(i) - centroids.row(c)).squaredNorm());
    }
    return centroids;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, int k, std::uint64_t seed, int max_iter, double tol) {
    const int n = static_cast<int>(points.rows());
    if (k < 1) throw std::invalid_argument("kmeans: k must be >= 1");
    if (k > n) throw std::invalid_argument("kmeans: k exceeds point count");
    if (!points.allFinite()) throw std::invalid_argument("kmeans: non-finite input");

    Rng rng(seed);
    KMeansResult result;
    result.centroids = plus_plus_seeding(points, k, rng);
    result.labels.assign(static_cast<std::size_t>(n), 0);

    Eigen::VectorXd point_sq_dist(n);
    std::vector<int> counts(static_cast<std::size_t>(k), 0);

    // Assignment with ties to the lowest centroid index, followed by
    // empty-cluster repair (promote the farthest-from-centroid point).
    auto assign_and_repair = [&]() {
        for (int i = 0; i < n; ++i) {
            int best = 0;
            double best_d = (points.row(i) - result.centroids.row(0)).squaredNorm();
            for (int c = 1; c < k; ++c) {
                const double d = (points.row(i) - result.centroids.row(c)).squaredNorm();
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            result.labels[static_cast<std::size_t>(i)] = best;
            point_sq_dist[i] = best_d;
        }
        for (bool repaired = true; repaired;) {
            repaired = false;
            std::fill(counts.begin(), counts.end(), 0);
            for (int l : result.labels) ++counts[static_cast<std::size_t>(l)];
            for (int c = 0; c < k; ++c) {
                if (counts[static_cast<std::size_t>(c)] > 0) continue;
                int farthest = 0;
                double far_d = -1.0;
                for (int i = 0; i < n; ++i) {
                    const int owner = result.labels[static_cast<std::size_t>(i)];
                    if (counts[static_cast<std::size_t>(owner)] > 1 && point_sq_dist[i] > far_d) {
                        far_d = point_sq_dist[i];
                        farthest = i;
                    }
                }
                result.centroids.row(c) = points.row(farthest);
                result.labels[static_cast<std::size_t>(farthest)] = c;
                point_sq_dist[farthest] = 0.0;
                repaired = true;
                break;  // recount before repairing the next one
            }
        }
        result.inertia = point_sq_dist.sum();
    };

    double prev_inertia = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= max_iter; ++iter) {
        result.iterations = iter;
        assign_and_repair();
        assert(result.inertia <= prev_inertia + 1e-9 * std::max(1.0, prev_inertia));
        prev_inertia = result.inertia;

        Eigen::MatrixXd fresh = Eigen::MatrixXd::Zero(k, points.cols());
        std::fill(counts.begin(), counts.end(), 0);
        for (int i = 0; i < n; ++i) {
            fresh.row(result.labels[static_cast<std::size_t>(i)]) += points.row(i);
            ++counts[static_cast<std::size_t>(result.labels[static_cast<std::size_t>(i)])];
        }
        double movement = 0.0;
        for (int c = 0; c < k; ++c) {
            fresh.row(c) /= static_cast<double>(counts[static_cast<std::size_t>(c)]);
            movement = std::max(movement, (fresh.row(c) - result.centroids.row(c)).norm());
        }
        result.centroids = fresh;
        if (movement <= tol) break;
    }

    // Labels consistent with the final centroids, clusters non-empty.
    assign_and_repair();
    return result;
}

}  // namespace rknn
