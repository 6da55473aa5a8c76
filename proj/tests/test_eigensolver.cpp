#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rknn/eigensolver.hpp"

#include "helpers.hpp"

#include <cmath>

using namespace rknn;

namespace {

NormalizedOperator operator_from_blocks(const std::vector<int>& sizes, double coupling) {
    return normalized_operator(testing::block_affinity(sizes, coupling));
}

NormalizedOperator random_sparse_operator(int n, std::uint64_t seed) {
    const auto pts = testing::random_points(n, 2, seed);
    PointSet ps;
    ps.points = pts;
    const NeighborTable nt = build_neighbor_table(ps, std::min(12, n - 1));
    const RefinedGraph g = mutual_filter(refine_edges(nt, 7));
    Eigen::VectorXd sigma = local_scales(nt, 7);
    substitute_degenerate_scales(sigma, nt);
    return normalized_operator(build_affinity(g, sigma));
}

}  // namespace

TEST_CASE("two-block ideal graph has a doubly degenerate top eigenvalue") {
    const NormalizedOperator op = operator_from_blocks({10, 14}, 0.0);
    const EigenSystem es = decompose(op, 4);
    CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(es.values[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(es.values[2] < 1.0 - 1e-6);
}

TEST_CASE("closed-form 2x2 operator") {
    AffinityMatrix a;
    a.n = 2;
    a.entries.resize(2, 2);
    std::vector<Eigen::Triplet<double>> trips{{0, 1, 0.5}, {1, 0, 0.5}};
    a.entries.setFromTriplets(trips.begin(), trips.end());
    a.local_scales = Eigen::VectorXd::Ones(2);
    const NormalizedOperator op = normalized_operator(a);  // off-diagonal becomes 1.0
    const EigenSystem es = decompose(op, 2);
    CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(es.values[1] == doctest::Approx(-1.0).epsilon(1e-12));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    CHECK(es.vectors(0, 0) == doctest::Approx(inv_sqrt2));
    CHECK(es.vectors(1, 0) == doctest::Approx(inv_sqrt2));
    // Sign rule: magnitude tie resolves to a positive lowest-index entry.
    CHECK(es.vectors(0, 1) == doctest::Approx(inv_sqrt2));
    CHECK(es.vectors(1, 1) == doctest::Approx(-inv_sqrt2));
}

TEST_CASE("residual, orthonormality and eigenvalue range on random operators") {
    for (std::uint64_t seed : {3ULL, 4ULL, 5ULL}) {
        const NormalizedOperator op = random_sparse_operator(120, seed);
        const EigenSystem es = decompose(op, 12);
        const auto chk = testing::check_eigensystem(op, es);
        CHECK(chk.max_residual <= 1e-8);
        CHECK(chk.max_orthonormality_error <= 1e-8);
        CHECK(chk.max_abs_value <= 1.0 + 1e-9);
        for (int j = 1; j < es.m; ++j) CHECK(es.values[j - 1] >= es.values[j]);
    }
}

TEST_CASE("dense path matches a full dense decomposition oracle") {
    const NormalizedOperator op = random_sparse_operator(50, 8);
    const EigenSystem es = decompose(op, 10);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle{Eigen::MatrixXd(op.entries)};
    for (int j = 0; j < 10; ++j) {
        const double expected = oracle.eigenvalues()[op.n - 1 - j];
        CHECK(es.values[j] == doctest::Approx(expected).epsilon(1e-10));
        // Compare vectors up to sign through the subspace projection.
        const Eigen::VectorXd ov = oracle.eigenvectors().col(op.n - 1 - j);
        const double overlap = std::abs(ov.dot(es.vectors.col(j)));
        if (j + 1 < op.n) {
            const double gap_prev = j > 0 ? std::abs(expected - oracle.eigenvalues()[op.n - j]) : 1.0;
            const double gap_next = std::abs(expected - oracle.eigenvalues()[op.n - 2 - j]);
            if (std::min(gap_prev, gap_next) > 1e-6) CHECK(overlap == doctest::Approx(1.0).epsilon(1e-8));
        }
    }
}

TEST_CASE("iterative path agrees with the dense oracle") {
    DecomposeOptions opts;
    opts.force_iterative = true;
    for (std::uint64_t seed : {11ULL, 12ULL}) {
        const NormalizedOperator op = random_sparse_operator(300, seed);
        const EigenSystem sparse_es = decompose(op, 8, opts);
        const EigenSystem dense_es = decompose(op, 8);
        const auto chk = testing::check_eigensystem(op, sparse_es);
        CHECK(chk.max_residual <= 1e-8);
        CHECK(chk.max_orthonormality_error <= 1e-8);
        for (int j = 0; j < 8; ++j)
            CHECK(sparse_es.values[j] == doctest::Approx(dense_es.values[j]).epsilon(1e-8));
    }
}

TEST_CASE("iterative path on an ideal block operator keeps the multiplicity") {
    DecomposeOptions opts;
    opts.force_iterative = true;
    const NormalizedOperator op = operator_from_blocks({40, 50, 45}, 0.0);
    const EigenSystem es = decompose(op, 6, opts);
    CHECK(es.values[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(es.values[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(es.values[2] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(es.values[3] < 1.0 - 1e-6);
    const auto chk = testing::check_eigensystem(op, es);
    CHECK(chk.max_residual <= 1e-8);
}

TEST_CASE("decompose is bit-stable across runs") {
    const NormalizedOperator op = random_sparse_operator(80, 21);
    const EigenSystem a = decompose(op, 10);
    const EigenSystem b = decompose(op, 10);
    CHECK(a.values == b.values);
    CHECK(a.vectors == b.vectors);
}

TEST_CASE("argument validation") {
    const NormalizedOperator op = random_sparse_operator(20, 2);
    CHECK_THROWS_AS(decompose(op, 1), std::invalid_argument);
    CHECK_THROWS_AS(decompose(op, 21), std::invalid_argument);
}
