#include "rknn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace rknn {

namespace {

std::vector<int> reencode(std::span<const int> labels, int& count) {
    std::vector<int> out;
    out.reserve(labels.size());
    std::unordered_map<int, int> ids;
    for (int l : labels) {
        auto [it, inserted] = ids.try_emplace(l, static_cast<int>(ids.size()));
        out.push_back(it->second);
    }
    count = static_cast<int>(ids.size());
    return out;
}

// Contingency table counts[t][l] over re-encoded label pairs.
std::vector<std::vector<std::uint64_t>> contingency(std::span<const int> truth,
                                                    std::span<const int> predicted, int& rows,
                                                    int& cols) {
    if (truth.size() != predicted.size())
        throw std::invalid_argument("metrics: label vectors differ in length");
    if (truth.empty()) throw std::invalid_argument("metrics: empty label vectors");
    const auto t = reencode(truth, rows);
    const auto l = reencode(predicted, cols);
    std::vector<std::vector<std::uint64_t>> table(
        static_cast<std::size_t>(rows), std::vector<std::uint64_t>(static_cast<std::size_t>(cols), 0));
    for (std::size_t i = 0; i < t.size(); ++i)
        ++table[static_cast<std::size_t>(t[i])][static_cast<std::size_t>(l[i])];
    return table;
}

// Minimum-cost perfect assignment on a square cost matrix (Hungarian
// algorithm with potentials). Returns row -> column.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0), v(static_cast<std::size_t>(n + 1), 0.0);
    std::vector<int> match(static_cast<std::size_t>(n + 1), 0), way(static_cast<std::size_t>(n + 1), 0);

    for (int i = 1; i <= n; ++i) {
        match[0] = i;
        int j0 = 0;
        std::vector<double> minv(static_cast<std::size_t>(n + 1), inf);
        std::vector<bool> used(static_cast<std::size_t>(n + 1), false);
        do {
            used[static_cast<std::size_t>(j0)] = true;
            const int i0 = match[static_cast<std::size_t>(j0)];
            int j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) continue;
                const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                                   u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
                if (cur < minv[static_cast<std::size_t>(j)]) {
                    minv[static_cast<std::size_t>(j)] = cur;
                    way[static_cast<std::size_t>(j)] = j0;
                }
                if (minv[static_cast<std::size_t>(j)] < delta) {
                    delta = minv[static_cast<std::size_t>(j)];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[static_cast<std::size_t>(j)]) {
                    u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
                    v[static_cast<std::size_t>(j)] -= delta;
                } else {
                    minv[static_cast<std::size_t>(j)] -= delta;
                }
            }
            j0 = j1;
        } while (match[static_cast<std::size_t>(j0)] != 0);
        do {
            const int j1 = way[static_cast<std::size_t>(j0)];
            match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<int> row_to_col(static_cast<std::size_t>(n), -1);
    for (int j = 1; j <= n; ++j)
        if (match[static_cast<std::size_t>(j)] > 0)
            row_to_col[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] = j - 1;
    return row_to_col;
}

std::uint64_t choose2(std::uint64_t x) { return x * (x - 1) / 2; }

double entropy(const std::vector<std::uint64_t>& counts, std::uint64_t n) {
    double h = 0.0;
    for (std::uint64_t c : counts) {
        if (c == 0) continue;
        const double p = static_cast<double>(c) / static_cast<double>(n);
        h -= p * std::log(p);
    }
    return h;
}

}  // namespace

double accuracy(std::span<const int> truth, std::span<const int> predicted) {
    int rows = 0, cols = 0;
    const auto table = contingency(truth, predicted, rows, cols);

    // Maximize matched counts: pad to square, negate for min-cost.
    const int s = std::max(rows, cols);
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(s),
                                          std::vector<double>(static_cast<std::size_t>(s), 0.0));
    for (int t = 0; t < rows; ++t)
        for (int l = 0; l < cols; ++l)
            cost[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)] =
                -static_cast<double>(table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)]);
    const auto row_to_col = min_cost_assignment(cost);

    std::uint64_t hits = 0;
    for (int t = 0; t < rows; ++t) {
        const int l = row_to_col[static_cast<std::size_t>(t)];
        if (l >= 0 && l < cols) hits += table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
    }
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

PairCounts pair_counts(std::span<const int> truth, std::span<const int> predicted) {
    if (truth.size() < 2) throw std::invalid_argument("pair_counts: need at least 2 points");
    int rows = 0, cols = 0;
    const auto table = contingency(truth, predicted, rows, cols);
    const std::uint64_t n = truth.size();

    std::uint64_t same_both = 0;
    std::vector<std::uint64_t> row_sums(static_cast<std::size_t>(rows), 0);
    std::vector<std::uint64_t> col_sums(static_cast<std::size_t>(cols), 0);
    for (int t = 0; t < rows; ++t) {
        for (int l = 0; l < cols; ++l) {
            const std::uint64_t c = table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
            same_both += choose2(c);
            row_sums[static_cast<std::size_t>(t)] += c;
            col_sums[static_cast<std::size_t>(l)] += c;
        }
    }
    std::uint64_t same_truth = 0, same_pred = 0;
    for (std::uint64_t r : row_sums) same_truth += choose2(r);
    for (std::uint64_t c : col_sums) same_pred += choose2(c);

    PairCounts pc;
    pc.n11 = same_both;
    pc.n01 = same_truth - same_both;
    pc.n10 = same_pred - same_both;
    pc.n00 = choose2(n) - pc.n11 - pc.n01 - pc.n10;
    return pc;
}

double ari(std::span<const int> truth, std::span<const int> predicted) {
    const PairCounts pc = pair_counts(truth, predicted);
    const double n11 = static_cast<double>(pc.n11), n00 = static_cast<double>(pc.n00),
                 n01 = static_cast<double>(pc.n01), n10 = static_cast<double>(pc.n10);
    const double denom = (n00 + n01) * (n01 + n11) + (n00 + n10) * (n10 + n11);
    if (denom == 0.0) return (pc.n01 == 0 && pc.n10 == 0) ? 1.0 : 0.0;
    return 2.0 * (n00 * n11 - n01 * n10) / denom;
}

double nmi(std::span<const int> truth, std::span<const int> predicted) {
    int rows = 0, cols = 0;
    const auto table = contingency(truth, predicted, rows, cols);
    const std::uint64_t n = truth.size();

    std::vector<std::uint64_t> row_sums(static_cast<std::size_t>(rows), 0);
    std::vector<std::uint64_t> col_sums(static_cast<std::size_t>(cols), 0);
    for (int t = 0; t < rows; ++t)
        for (int l = 0; l < cols; ++l) {
            row_sums[static_cast<std::size_t>(t)] += table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
            col_sums[static_cast<std::size_t>(l)] += table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
        }

    const double h_truth = entropy(row_sums, n);
    const double h_pred = entropy(col_sums, n);
    if (h_truth == 0.0 && h_pred == 0.0) return 1.0;
    if (h_truth == 0.0 || h_pred == 0.0) return 0.0;

    double mi = 0.0;
    for (int t = 0; t < rows; ++t) {
        for (int l = 0; l < cols; ++l) {
            const std::uint64_t c = table[static_cast<std::size_t>(t)][static_cast<std::size_t>(l)];
            if (c == 0) continue;
            const double p = static_cast<double>(c) / static_cast<double>(n);
            const double pt = static_cast<double>(row_sums[static_cast<std::size_t>(t)]) / static_cast<double>(n);
            const double pl = static_cast<double>(col_sums[static_cast<std::size_t>(l)]) / static_cast<double>(n);
            mi += p * std::log(p / (pt * pl));
        }
    }
    return mi / std::max(h_truth, h_pred);
}

MetricScores evaluate_labels(std::span<const int> truth, std::span<const int> predicted) {
    return {accuracy(truth, predicted), ari(truth, predicted), nmi(truth, predicted)};
}

}  // namespace rknn
