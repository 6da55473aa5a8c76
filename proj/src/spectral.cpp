#include "rknn/spectral.hpp"

#include "rknn/kmeans.hpp"
#include "rknn/rng.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace rknn {

namespace {

// Strict floating-point comparison on eigenvalue gaps misfires on spectra
// that are degenerate in exact arithmetic (disconnected components, block
// symmetry) and split only at roundoff level. Gamma lives in [0, 2], so a
// small absolute slack is enough to ignore those splits.
constexpr double kGapSlack = 1e-9;

}  // namespace

GapScan detect_cluster_count(const EigenSystem& es, int lambda_max, bool eq7_variant) {
    if (es.m < 4) throw std::invalid_argument("detect_cluster_count: need at least 4 eigenpairs");
    if (lambda_max < 4 || lambda_max > es.m)
        throw std::invalid_argument("detect_cluster_count: require 4 <= lambda_max <= m");

    GapScan scan;
    scan.gamma.resize(static_cast<std::size_t>(lambda_max));
    for (int i = 0; i < lambda_max; ++i) scan.gamma[static_cast<std::size_t>(i)] = 1.0 - es.values[i];
    scan.running_mean.assign(static_cast<std::size_t>(lambda_max), 0.0);
    scan.running_std.assign(static_cast<std::size_t>(lambda_max), 0.0);

    // Running stats over gamma_2..gamma_i (1-based positions).
    double sum = 0.0, sum_sq = 0.0;
    for (int i = 2; i <= lambda_max - 1; ++i) {
        const double g = scan.gamma[static_cast<std::size_t>(i - 1)];
        sum += g;
        sum_sq += g * g;
        const double count = static_cast<double>(i - 1);
        const double mean = sum / count;
        const double var = std::max(sum_sq / count - mean * mean, 0.0);
        const double std_dev = std::sqrt(var);
        scan.running_mean[static_cast<std::size_t>(i - 1)] = mean;
        scan.running_std[static_cast<std::size_t>(i - 1)] = std_dev;

        const double successor = scan.gamma[static_cast<std::size_t>(i)];
        const double probe = eq7_variant ? (sum + successor) / (count + 1.0) : successor;
        if (probe > mean + std_dev + kGapSlack) {
            scan.detected_C = i;
            scan.triggered = true;
            return scan;
        }
    }
    scan.detected_C = lambda_max;
    scan.triggered = false;
    return scan;
}

Eigen::MatrixXd build_embedding(const EigenSystem& es, int top, bool row_normalize) {
    if (top < 2 || top > es.m) throw std::invalid_argument("build_embedding: top index out of range");
    Eigen::MatrixXd emb = es.vectors.middleCols(1, top - 1);
    if (row_normalize) {
        for (int i = 0; i < emb.rows(); ++i) {
            const double norm = emb.row(i).norm();
            if (norm > 0.0) emb.row(i) /= norm;
        }
    }
    return emb;
}

double inter_cluster_weight(const AffinityMatrix& a, std::span<const int> labels) {
    if (static_cast<int>(labels.size()) != a.n)
        throw std::invalid_argument("inter_cluster_weight: label vector length mismatch");
    double sum = 0.0;
    for (int k = 0; k < a.entries.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(a.entries, k); it; ++it)
            if (it.row() < it.col() &&
                labels[static_cast<std::size_t>(it.row())] != labels[static_cast<std::size_t>(it.col())])
                sum += it.value();
    return sum;
}

ClusteringReport cluster(const PointSet& input, const ClusterConfig& config,
                         PipelineArtifacts* artifacts) {
    const auto t_start = std::chrono::steady_clock::now();
    auto seconds_since = [](std::chrono::steady_clock::time_point t0) {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    if (input.n() < 4) throw std::invalid_argument("cluster: need at least 4 points");
    const PointSet ps = config.standardize_input ? standardize(input) : input;

    ClusteringReport report;
    report.config = config;
    report.n = ps.n();
    report.dim = ps.dim();
    report.dataset_name = ps.name;

    // Graph stage.
    const auto t_graph = std::chrono::steady_clock::now();
    const int k_max = config.k_max > 0 ? config.k_max : default_k_max(ps.n(), config.baseline_n);
    report.config.k_max = k_max;
    const NeighborTable nt = build_neighbor_table(ps, k_max);
    const RefinedGraph graph = mutual_filter(refine_edges(nt, config.baseline_n));
    report.e_percent = edge_percentage(graph);
    report.edge_count = graph.edges.size();
    report.adaptive_k = graph.adaptive_k;
    report.isolated = graph.isolated_vertices();
    report.components = component_stats(graph);
    report.graph_seconds = seconds_since(t_graph);

    // Affinity and operator.
    Eigen::VectorXd scales = local_scales(nt, config.scale_k);
    report.degenerate_scales = substitute_degenerate_scales(scales, nt);
    const AffinityMatrix affinity = build_affinity(graph, scales);
    const NormalizedOperator op = normalized_operator(affinity);

    // Eigendecomposition; enough pairs for both the scan and the sweep.
    const int lambda_max = std::min(config.lambda_max, ps.n());
    report.config.lambda_max = lambda_max;
    const int m = std::min(ps.n(), std::max({lambda_max, config.cluster_count, 4}));
    const auto t_eigen = std::chrono::steady_clock::now();
    const EigenSystem es = decompose(op, m);
    report.eigen_seconds = seconds_since(t_eigen);

    // Cluster count.
    if (config.cluster_count > 0) {
        if (config.cluster_count > ps.n())
            throw std::invalid_argument("cluster: cluster count exceeds point count");
        report.cluster_count = config.cluster_count;
        report.auto_detected = false;
    } else {
        report.gap = detect_cluster_count(es, std::max(lambda_max, 4), config.eq7_gap);
        report.cluster_count = report.gap->detected_C;
        report.auto_detected = true;
        report.low_confidence = !report.gap->triggered || report.components.with_edges <= 1;
    }
    const int c = report.cluster_count;

    // Candidate sweep: embeddings v_2..v_i for i = 3..C; C = 2 degenerates
    // to the single 1-D embedding of v_2; C = 1 labels everything 0.
    if (c <= 1) {
        CandidateLabeling cand;
        cand.dims_used = 1;
        cand.labels.assign(static_cast<std::size_t>(ps.n()), 0);
        cand.inter_cluster_weight = 0.0;
        report.candidates.push_back(std::move(cand));
    } else {
        const int sweep_begin = (c == 2) ? 2 : 3;
        for (int top = sweep_begin; top <= c; ++top) {
            const Eigen::MatrixXd emb = build_embedding(es, top, config.row_normalize);
            const KMeansResult km =
                kmeans(emb, c, derive_seed(config.seed, static_cast<std::uint64_t>(top)));
            CandidateLabeling cand;
            cand.dims_used = top;
            cand.labels = km.labels;
            cand.inter_cluster_weight = inter_cluster_weight(affinity, cand.labels);
            report.candidates.push_back(std::move(cand));
        }
    }

    // Minimal inter-cluster weight wins; ties go to fewest dimensions. The
    // sweep is in ascending dimension order, so strict comparison suffices.
    int best = 0;
    for (int i = 1; i < static_cast<int>(report.candidates.size()); ++i)
        if (report.candidates[static_cast<std::size_t>(i)].inter_cluster_weight <
            report.candidates[static_cast<std::size_t>(best)].inter_cluster_weight)
            best = i;
    report.selected_candidate = best;
    report.labels = report.candidates[static_cast<std::size_t>(best)].labels;

    if (ps.labels) report.metrics = evaluate_labels(*ps.labels, report.labels);
    report.total_seconds = seconds_since(t_start);
    if (artifacts) {
        artifacts->table = nt;
        artifacts->graph = graph;
        artifacts->affinity = affinity;
        artifacts->op = op;
        artifacts->eigensystem = es;
    }
    return report;
}

}  // namespace rknn
