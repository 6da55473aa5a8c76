#pragma once

#include "rknn/dataset.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace rknn {

/// Per-point table of the exact k_max nearest neighbors.
///
/// Each row is sorted by ascending distance, distance ties broken by the
/// smaller point index; the point itself never appears in its own row.
struct NeighborTable {
    Eigen::MatrixXi ids;    // N x k_max
    Eigen::MatrixXd dists;  // N x k_max, non-decreasing per row
    int k_max = 0;

    int n() const { return static_cast<int>(ids.rows()); }
};

/// Directed edges surviving the adaptive-k refinement, before the
/// mutual-agreement filter. out[i] lists (neighbor id, distance) pairs in
/// ascending-distance order; adaptive_k[i] == out[i].size().
struct DirectedEdges {
    std::vector<std::vector<std::pair<int, double>>> out;
    std::vector<int> adaptive_k;

    int n() const { return static_cast<int>(out.size()); }
};

struct Edge {
    int i = 0, j = 0;  // i < j
    double dist = 0.0;
};

/// Sparse symmetric weighted graph after refinement + mutuality filtering.
/// Weights are Euclidean distances. Isolated vertices are retained.
struct RefinedGraph {
    int n = 0;
    std::vector<Edge> edges;      // each undirected edge stored once, i < j
    std::vector<int> adaptive_k;  // pre-mutuality surviving out-degree per point

    std::vector<int> degrees() const;
    std::vector<int> isolated_vertices() const;
};

// Default cap on neighbors examined per point; configurable, reported in
// output. Must stay below N.
int default_k_max(int n, int baseline_n);

/// Exact k_max-nearest-neighbor table via the kd-tree. 1 <= k_max < N.
NeighborTable build_neighbor_table(const PointSet& ps, int k_max);

/// Prefix running threshold over one sorted distance row:
/// out[j-1] = mean(d_1..d_j) + population std(d_1..d_j), j = 1..k_max.
std::vector<double> running_threshold(std::span<const double> dists_row);

/// Adaptive-k refinement: the directed edge to the j-th neighbor of point i
/// survives iff threshold[j] <= threshold[baseline_n]. Positions before
/// baseline_n are subject to the same cut.
DirectedEdges refine_edges(const NeighborTable& nt, int baseline_n = 7);

/// Keeps an undirected edge (i, j) iff both i->j and j->i survived.
RefinedGraph mutual_filter(const DirectedEdges& de);

/// 100 * |edges| / (n(n-1)/2). Requires n >= 2.
double edge_percentage(const RefinedGraph& g);

/// Component id per vertex (0-based, in order of first appearance); an
/// isolated vertex forms its own component.
std::vector<int> connected_components(const RefinedGraph& g);

struct ComponentStats {
    int total = 0;       // connected components, isolated vertices included
    int with_edges = 0;  // components containing at least one edge
    int isolated = 0;    // degree-0 vertices
};
ComponentStats component_stats(const RefinedGraph& g);

/// Edge-list export, one "i j distance" line per edge, 0-based ids, i < j.
void write_edge_list(const RefinedGraph& g, const std::string& path);

/// JSON summary: {n, edge_count, e_percent, adaptive_k histogram}.
std::string graph_summary_json(const RefinedGraph& g);

}  // namespace rknn
