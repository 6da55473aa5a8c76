#pragma once

#include <cstdint>
#include <span>

namespace rknn {

/// Classification of all N(N-1)/2 point pairs against two labelings T, L:
/// n11 same cluster in both, n00 different in both, n01 same in T only,
/// n10 same in L only.
struct PairCounts {
    std::uint64_t n11 = 0, n00 = 0, n01 = 0, n10 = 0;
};

/// Clustering accuracy: best hit fraction over injective mappings of L ids
/// onto T ids, computed by optimal assignment on the contingency table.
/// Unmatched ids contribute zero hits.
double accuracy(std::span<const int> truth, std::span<const int> predicted);

PairCounts pair_counts(std::span<const int> truth, std::span<const int> predicted);

/// Pair-counting adjusted Rand index,
/// 2(n00 n11 - n01 n10) / ((n00+n01)(n01+n11) + (n00+n10)(n10+n11)).
/// A zero denominator yields 1 when the partitions are identical, else 0.
double ari(std::span<const int> truth, std::span<const int> predicted);

/// Normalized mutual information I(T;L) / max{H(T), H(L)} with natural-log
/// entropies; 1 when both entropies vanish, 0 when exactly one does.
double nmi(std::span<const int> truth, std::span<const int> predicted);

struct MetricScores {
    double acc = 0.0;
    double ari = 0.0;
    double nmi = 0.0;
};

MetricScores evaluate_labels(std::span<const int> truth, std::span<const int> predicted);

}  // namespace rknn
