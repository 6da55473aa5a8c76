#include "rknn/eigensolver.hpp"

#include "rknn/rng.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace rknn {

namespace {

// Numerically coincident eigenvalues (disconnected components, exact block
// symmetry) leave the solver's basis arbitrary within the cluster, which
// makes everything downstream of an eigenvector slice unstable. Pick a
// canonical basis instead: localize by greedily extracting projector
// columns (for component-structured eigenspaces this recovers the
// per-component vectors), order by support size so informative directions
// come first, and when the cluster holds the leading position, park the
// smallest-support direction there since consumers treat the first vector
// as trivial and skip it.
void canonicalize_cluster(Eigen::MatrixXd& vectors, int begin, int size) {
    const int n = static_cast<int>(vectors.rows());
    const Eigen::MatrixXd basis = vectors.middleCols(begin, size);

    Eigen::VectorXd leverage = basis.rowwise().squaredNorm();
    Eigen::MatrixXd localized(n, size);
    int extracted = 0;
    for (int t = 0; t < size; ++t) {
        int pivot = 0;
        double best = -1.0;
        for (int i = 0; i < n; ++i) {
            if (leverage[i] > best) {
                best = leverage[i];
                pivot = i;
            }
        }
        Eigen::VectorXd w = basis * basis.row(pivot).transpose();
        for (int pass = 0; pass < 2; ++pass)
            if (extracted > 0)
                w -= localized.leftCols(extracted) * (localized.leftCols(extracted).transpose() * w);
        const double norm = w.norm();
        if (norm < 1e-10) return;  // no localized structure; keep the solver's basis
        w /= norm;
        localized.col(extracted++) = w;
        for (int i = 0; i < n; ++i) leverage[i] = std::max(leverage[i] - w[i] * w[i], 0.0);
    }

    // Support size via inverse participation; larger support first.
    std::vector<int> order(static_cast<std::size_t>(size));
    std::vector<double> support(static_cast<std::size_t>(size));
    for (int j = 0; j < size; ++j) {
        order[static_cast<std::size_t>(j)] = j;
        support[static_cast<std::size_t>(j)] = 1.0 / localized.col(j).array().pow(4).sum();
    }
    std::stable_sort(order.begin(), order.end(), [&support](int a, int b) {
        return support[static_cast<std::size_t>(a)] > support[static_cast<std::size_t>(b)];
    });
    if (begin == 0 && size >= 2) {
        const int smallest = order.back();
        order.pop_back();
        order.insert(order.begin(), smallest);
    }
    for (int j = 0; j < size; ++j) vectors.col(begin + j) = localized.col(order[static_cast<std::size_t>(j)]);
}

void canonicalize_degenerate_clusters(EigenSystem& es) {
    int begin = 0;
    while (begin < es.m) {
        int end = begin + 1;
        while (end < es.m && es.values[end - 1] - es.values[end] <= 1e-10 &&
               es.values[begin] - es.values[end] <= 1e-9)
            ++end;
        if (end - begin >= 2) canonicalize_cluster(es.vectors, begin, end - begin);
        begin = end;
    }
}

void fix_signs(Eigen::MatrixXd& vectors) {
    for (int c = 0; c < vectors.cols(); ++c) {
        int lead = 0;
        double best = -1.0;
        for (int r = 0; r < vectors.rows(); ++r) {
            const double mag = std::abs(vectors(r, c));
            if (mag > best) {
                best = mag;
                lead = r;
            }
        }
        if (vectors(lead, c) < 0.0) vectors.col(c) = -vectors.col(c);
    }
}

EigenSystem dense_decompose(const NormalizedOperator& op, int m) {
    const Eigen::MatrixXd dense(op.entries);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("dense eigendecomposition failed to converge");

    EigenSystem es;
    es.m = m;
    es.values.resize(m);
    es.vectors.resize(op.n, m);
    // Eigen returns ascending order; take the top m in descending order.
    for (int j = 0; j < m; ++j) {
        es.values[j] = solver.eigenvalues()[op.n - 1 - j];
        es.vectors.col(j) = solver.eigenvectors().col(op.n - 1 - j);
    }
    canonicalize_degenerate_clusters(es);
    fix_signs(es.vectors);
    return es;
}

Eigen::VectorXd deterministic_unit_vector(int n, std::uint64_t stream) {
    Rng rng(derive_seed(0x65696773ULL, stream));
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = rng.uniform(-1.0, 1.0);
    v /= v.norm();
    return v;
}

// Restarted Lanczos with full reorthogonalization on the shifted operator
// B = A + I (spectrum in [0, 2]), so the wanted largest-algebraic pairs of A
// are the dominant pairs of B. With full reorthogonalization the projected
// matrix is computed as V^T B V and diagonalized densely at each restart;
// the top Ritz vectors are kept (thick restart) until the wanted residuals
// ||A x - theta x|| = ||B x - (theta+1) x|| fall below tolerance.
EigenSystem lanczos_decompose(const NormalizedOperator& op, int m, const DecomposeOptions& opts) {
    const int n = op.n;
    const int basis_size = std::min(n, std::max(2 * m + 10, 40));
    const int keep = std::min(m + 10, basis_size - 2);

    Eigen::SparseMatrix<double> shifted = op.entries;
    for (int i = 0; i < n; ++i) shifted.coeffRef(i, i) += 1.0;
    shifted.makeCompressed();

    Eigen::MatrixXd basis(n, basis_size);   // V, orthonormal columns
    Eigen::MatrixXd image(n, basis_size);   // W = B V, column-aligned with V
    int cols = 0;
    std::uint64_t injected = 0;

    auto orthogonalize = [&](Eigen::VectorXd& w) {
        for (int pass = 0; pass < 2; ++pass)
            if (cols > 0) w -= basis.leftCols(cols) * (basis.leftCols(cols).transpose() * w);
        return w.norm();
    };

    auto append_direction = [&](Eigen::VectorXd w) {
        double norm = orthogonalize(w);
        while (norm < 1e-12) {  // breakdown: inject a fresh deterministic direction
            w = deterministic_unit_vector(n, ++injected);
            norm = orthogonalize(w);
        }
        basis.col(cols) = w / norm;
        image.col(cols) = shifted * basis.col(cols);
        ++cols;
    };

    append_direction(deterministic_unit_vector(n, 0));

    double worst_residual = 0.0;
    for (int restart = 0; restart < opts.max_restarts; ++restart) {
        while (cols < basis_size) append_direction(image.col(cols - 1));

        Eigen::MatrixXd projected = basis.leftCols(cols).transpose() * image.leftCols(cols);
        projected = 0.5 * (projected + projected.transpose().eval());
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> small(projected);
        if (small.info() != Eigen::Success)
            throw std::runtime_error("projected eigendecomposition failed during Lanczos restart");

        // Ritz pairs, descending.
        Eigen::MatrixXd rotation(cols, keep);
        Eigen::VectorXd ritz_values(keep);
        for (int j = 0; j < keep; ++j) {
            rotation.col(j) = small.eigenvectors().col(cols - 1 - j);
            ritz_values[j] = small.eigenvalues()[cols - 1 - j];
        }
        Eigen::MatrixXd ritz_vectors = basis.leftCols(cols) * rotation;
        Eigen::MatrixXd ritz_images = image.leftCols(cols) * rotation;

        worst_residual = 0.0;
        int worst_index = m - 1;
        for (int j = 0; j < m; ++j) {
            const double res = (ritz_images.col(j) - ritz_values[j] * ritz_vectors.col(j)).norm();
            const double scale = std::max(1.0, std::abs(ritz_values[j] - 1.0));
            if (res / scale > worst_residual) {
                worst_residual = res / scale;
                worst_index = j;
            }
        }
        if (worst_residual <= opts.tolerance) {
            EigenSystem es;
            es.m = m;
            es.values.resize(m);
            es.vectors.resize(n, m);
            for (int j = 0; j < m; ++j) {
                es.values[j] = ritz_values[j] - 1.0;  // undo the shift
                es.vectors.col(j) = ritz_vectors.col(j) / ritz_vectors.col(j).norm();
            }
            canonicalize_degenerate_clusters(es);
            fix_signs(es.vectors);
            return es;
        }

        // Thick restart: keep the leading Ritz vectors and expand from the
        // least-converged wanted direction.
        basis.leftCols(keep) = ritz_vectors;
        image.leftCols(keep) = ritz_images;
        cols = keep;
        append_direction(image.col(worst_index));
    }

    std::ostringstream os;
    os << "Lanczos failed to converge after " << opts.max_restarts
       << " restarts; worst relative residual " << worst_residual;
    throw std::runtime_error(os.str());
}

}  // namespace

EigenSystem decompose(const NormalizedOperator& op, int m, const DecomposeOptions& opts) {
    if (m < 2) throw std::invalid_argument("decompose: m must be >= 2");
    if (m > op.n) throw std::invalid_argument("decompose: m exceeds matrix size");
    // The iterative path needs room for the expansion basis.
    if (!opts.force_iterative && op.n <= opts.dense_threshold) return dense_decompose(op, m);
    if (2 * m + 10 >= op.n) return dense_decompose(op, m);
    return lanczos_decompose(op, m, opts);
}

}  // namespace rknn
