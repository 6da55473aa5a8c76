#pragma once

#include "rknn/affinity.hpp"
#include "rknn/dataset.hpp"
#include "rknn/eigensolver.hpp"
#include "rknn/knn_graph.hpp"
#include "rknn/metrics.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rknn {

/// Eigengap scan over gamma_i = 1 - lambda_i (ascending once the operator
/// eigenvalues are taken in descending order). The first position i whose
/// successor exceeds mean + population std of gamma_2..gamma_i sets the
/// cluster count.
struct GapScan {
    std::vector<double> gamma;         // ascending, length = scanned pairs
    std::vector<double> running_mean;  // running stats over gamma_2..gamma_i, aligned to gamma
    std::vector<double> running_std;
    int detected_C = 0;
    bool triggered = false;
};

/// Scans i = 2..lambda_max-1; stops at the first trigger. Without a trigger
/// detected_C = lambda_max and triggered stays false (reported as a
/// warning downstream). `eq7_variant` compares the successor running mean
/// instead of the raw successor value.
GapScan detect_cluster_count(const EigenSystem& es, int lambda_max, bool eq7_variant = false);

/// Embedding from eigenvectors v_2..v_top (1-based positions in descending
/// eigenvalue order), an N x (top-1) matrix. With row_normalize, nonzero
/// rows are scaled to unit norm; zero rows (isolated vertices) stay at the
/// origin. Requires 2 <= top <= m.
Eigen::MatrixXd build_embedding(const EigenSystem& es, int top, bool row_normalize);

/// Sum of affinity weights over undirected edges joining differently
/// labeled endpoints; each edge counted once.
double inter_cluster_weight(const AffinityMatrix& a, std::span<const int> labels);

struct ClusterConfig {
    int k_max = 0;  // 0 = default_k_max(N, baseline_n)
    int baseline_n = 7;
    int scale_k = 7;
    int cluster_count = 0;  // 0 = detect automatically
    int lambda_max = 25;
    std::uint64_t seed = 0;
    bool row_normalize = true;
    bool eq7_gap = false;
    bool standardize_input = false;
};

struct CandidateLabeling {
    int dims_used = 0;  // embedding uses v_2..v_dims_used
    std::vector<int> labels;
    double inter_cluster_weight = 0.0;
};

struct ClusteringReport {
    // Configuration echo (resolved values, not defaults).
    ClusterConfig config;
    int n = 0, dim = 0;
    std::string dataset_name;

    int cluster_count = 0;  // detected or supplied
    bool auto_detected = false;
    bool low_confidence = false;  // auto detection on a single-component graph or no trigger
    std::optional<GapScan> gap;

    std::vector<CandidateLabeling> candidates;
    int selected_candidate = 0;  // index into candidates
    std::vector<int> labels;     // the selected labeling

    double e_percent = 0.0;
    std::size_t edge_count = 0;
    std::vector<int> adaptive_k;
    std::vector<int> isolated;
    ComponentStats components;
    std::vector<int> degenerate_scales;

    std::optional<MetricScores> metrics;  // when ground truth present

    double graph_seconds = 0.0;
    double eigen_seconds = 0.0;
    double total_seconds = 0.0;
};

/// Intermediate products of a pipeline run, for exports and tests.
struct PipelineArtifacts {
    NeighborTable table;
    RefinedGraph graph;
    AffinityMatrix affinity;
    NormalizedOperator op;
    EigenSystem eigensystem;
};

/// Full pipeline: neighbor table -> refinement -> mutual filter -> local
/// scales -> affinity -> normalized operator -> eigendecomposition ->
/// cluster-count detection (unless given) -> embedding sweep with seeded
/// k-means -> candidate with minimal inter-cluster weight (ties: fewest
/// dimensions). Deterministic for a fixed config.
ClusteringReport cluster(const PointSet& ps, const ClusterConfig& config,
                         PipelineArtifacts* artifacts = nullptr);

}  // namespace rknn
