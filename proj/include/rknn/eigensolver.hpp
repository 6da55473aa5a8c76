#pragma once

#include "rknn/affinity.hpp"

#include <Eigen/Dense>

namespace rknn {

/// Top-m eigenpairs of the symmetric normalized operator, sorted by
/// descending eigenvalue. Columns are unit-norm with a deterministic sign:
/// the entry of largest magnitude is positive (magnitude ties resolve to
/// the lowest index).
struct EigenSystem {
    Eigen::VectorXd values;   // length m, descending
    Eigen::MatrixXd vectors;  // N x m
    int m = 0;
};

struct DecomposeOptions {
    // Dense full decomposition up to this size, restarted Lanczos with full
    // reorthogonalization above it.
    int dense_threshold = 2000;
    double tolerance = 1e-10;  // relative residual target, iterative path
    int max_restarts = 200;
    bool force_iterative = false;  // test hook
};

/// Requires 2 <= m <= N. The iterative path throws on non-convergence,
/// reporting the worst residual norm.
EigenSystem decompose(const NormalizedOperator& op, int m, const DecomposeOptions& opts = {});

}  // namespace rknn
