#include "rknn/knn_graph.hpp"

#include "rknn/kdtree.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>

namespace rknn {

std::vector<int> RefinedGraph::degrees() const {
    std::vector<int> deg(static_cast<std::size_t>(n), 0);
    for (const auto& e : edges) {
        ++deg[static_cast<std::size_t>(e.i)];
        ++deg[static_cast<std::size_t>(e.j)];
    }
    return deg;
}

std::vector<int> RefinedGraph::isolated_vertices() const {
    const auto deg = degrees();
    std::vector<int> iso;
    for (int v = 0; v < n; ++v)
        if (deg[static_cast<std::size_t>(v)] == 0) iso.push_back(v);
    return iso;
}

int default_k_max(int n, int baseline_n) {
    return std::min(n - 1, std::max(3 * baseline_n, 30));
}

NeighborTable build_neighbor_table(const PointSet& ps, int k_max) {
    const int n = ps.n();
    if (n < 2) throw std::invalid_argument("build_neighbor_table: need at least 2 points");
    if (k_max < 1 || k_max >= n)
        throw std::invalid_argument("build_neighbor_table: require 1 <= k_max < N");

    KdTree tree(ps.points);
    NeighborTable nt;
    nt.k_max = k_max;
    nt.ids.resize(n, k_max);
    nt.dists.resize(n, k_max);
    for (int i = 0; i < n; ++i) {
        const auto nbrs = tree.knn(ps.points.row(i), k_max, i);
        for (int j = 0; j < k_max; ++j) {
            nt.ids(i, j) = nbrs[static_cast<std::size_t>(j)].index;
            nt.dists(i, j) = std::sqrt(nbrs[static_cast<std::size_t>(j)].sq_dist);
        }
    }
    return nt;
}

std::vector<double> running_threshold(std::span<const double> dists_row) {
    std::vector<double> out;
    out.reserve(dists_row.size());
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t j = 0; j < dists_row.size(); ++j) {
        const double d = dists_row[j];
        if (!(d >= 0.0)) throw std::invalid_argument("running_threshold: negative or NaN distance");
        if (j > 0 && d < dists_row[j - 1])
            throw std::invalid_argument("running_threshold: row not non-decreasing");
        sum += d;
        sum_sq += d * d;
        const double count = static_cast<double>(j + 1);
        const double mean = sum / count;
        const double var = std::max(sum_sq / count - mean * mean, 0.0);
        out.push_back(mean + std::sqrt(var));
    }
    return out;
}

DirectedEdges refine_edges(const NeighborTable& nt, int baseline_n) {
    if (baseline_n < 2) throw std::invalid_argument("refine_edges: baseline_n must be >= 2");
    if (baseline_n > nt.k_max) throw std::invalid_argument("refine_edges: baseline_n exceeds k_max");

    const int n = nt.n();
    DirectedEdges de;
    de.out.resize(static_cast<std::size_t>(n));
    de.adaptive_k.resize(static_cast<std::size_t>(n));
    std::vector<double> row(static_cast<std::size_t>(nt.k_max));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < nt.k_max; ++j) row[static_cast<std::size_t>(j)] = nt.dists(i, j);
        const auto dm = running_threshold(row);
        const double cap = dm[static_cast<std::size_t>(baseline_n - 1)];
        auto& out = de.out[static_cast<std::size_t>(i)];
        for (int j = 0; j < nt.k_max; ++j)
            if (dm[static_cast<std::size_t>(j)] <= cap) out.emplace_back(nt.ids(i, j), nt.dists(i, j));
        de.adaptive_k[static_cast<std::size_t>(i)] = static_cast<int>(out.size());
    }
    return de;
}

RefinedGraph mutual_filter(const DirectedEdges& de) {
    const int n = de.n();
    RefinedGraph g;
    g.n = n;
    g.adaptive_k = de.adaptive_k;

    std::vector<std::vector<int>> targets(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        auto& t = targets[static_cast<std::size_t>(i)];
        t.reserve(de.out[static_cast<std::size_t>(i)].size());
        for (const auto& [j, d] : de.out[static_cast<std::size_t>(i)]) t.push_back(j);
        std::sort(t.begin(), t.end());
    }
    auto has_edge = [&targets](int from, int to) {
        const auto& t = targets[static_cast<std::size_t>(from)];
        return std::binary_search(t.begin(), t.end(), to);
    };

    for (int i = 0; i < n; ++i) {
        for (const auto& [j, d] : de.out[static_cast<std::size_t>(i)]) {
            if (i < j && has_edge(j, i)) g.edges.push_back({i, j, d});
        }
    }
    std::sort(g.edges.begin(), g.edges.end(), [](const Edge& a, const Edge& b) {
        return a.i < b.i || (a.i == b.i && a.j < b.j);
    });
    return g;
}

double edge_percentage(const RefinedGraph& g) {
    if (g.n < 2) throw std::invalid_argument("edge_percentage: need n >= 2");
    const double full = 0.5 * static_cast<double>(g.n) * static_cast<double>(g.n - 1);
    return 100.0 * static_cast<double>(g.edges.size()) / full;
}

std::vector<int> connected_components(const RefinedGraph& g) {
    std::vector<int> parent(static_cast<std::size_t>(g.n));
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<int> rank(static_cast<std::size_t>(g.n), 0);

    std::function<int(int)> find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (rank[static_cast<std::size_t>(a)] < rank[static_cast<std::size_t>(b)]) std::swap(a, b);
        parent[static_cast<std::size_t>(b)] = a;
        if (rank[static_cast<std::size_t>(a)] == rank[static_cast<std::size_t>(b)])
            ++rank[static_cast<std::size_t>(a)];
    };
    for (const auto& e : g.edges) unite(e.i, e.j);

    std::vector<int> comp(static_cast<std::size_t>(g.n), -1);
    int next = 0;
    for (int v = 0; v < g.n; ++v) {
        const int root = find(v);
        if (comp[static_cast<std::size_t>(root)] < 0) comp[static_cast<std::size_t>(root)] = next++;
        comp[static_cast<std::size_t>(v)] = comp[static_cast<std::size_t>(root)];
    }
    return comp;
}

ComponentStats component_stats(const RefinedGraph& g) {
    const auto comp = connected_components(g);
    const auto deg = g.degrees();
    int total = 0;
    for (int c : comp) total = std::max(total, c + 1);
    std::vector<bool> has_edge(static_cast<std::size_t>(total), false);
    ComponentStats stats;
    stats.total = total;
    for (int v = 0; v < g.n; ++v) {
        if (deg[static_cast<std::size_t>(v)] == 0)
            ++stats.isolated;
        else
            has_edge[static_cast<std::size_t>(comp[static_cast<std::size_t>(v)])] = true;
    }
    for (bool h : has_edge)
        if (h) ++stats.with_edges;
    return stats;
}

void write_edge_list(const RefinedGraph& g, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    char buf[32];
    for (const auto& e : g.edges) {
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), e.dist);
        out << e.i << ' ' << e.j << ' ' << std::string_view(buf, static_cast<std::size_t>(ptr - buf))
            << '\n';
    }
    if (!out) throw std::runtime_error("I/O error while writing " + path);
}

std::string graph_summary_json(const RefinedGraph& g) {
    nlohmann::ordered_json j;
    j["n"] = g.n;
    j["edge_count"] = g.edges.size();
    j["e_percent"] = g.n >= 2 ? edge_percentage(g) : 0.0;
    std::map<int, int> hist;
    for (int k : g.adaptive_k) ++hist[k];
    nlohmann::ordered_json h = nlohmann::ordered_json::object();
    for (const auto& [k, count] : hist) h[std::to_string(k)] = count;
    j["adaptive_k_histogram"] = h;
    return j.dump(2);
}

}  // namespace rknn
