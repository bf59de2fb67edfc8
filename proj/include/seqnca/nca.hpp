#pragma once

#include <vector>

#include "seqnca/matrix.hpp"

namespace seqnca {

/// A batch of fixed-length embeddings with integer class ids, the domain of
/// the neighbourhood components analysis objective.
struct EmbeddingSet {
    Matrix embeddings;        // N x m, one embedding per row
    std::vector<int> labels;  // N class ids

    std::size_t size() const { return embeddings.rows(); }
    std::size_t dim() const { return embeddings.cols(); }
    void check() const;  // throws on labels/embeddings length mismatch
};

/// D[a][b] = ||e_a - e_b||^2, symmetric with zero diagonal. Tiny negatives
/// from the expanded form |a|^2 + |b|^2 - 2ab are clamped to 0.
Matrix pairwise_sq_dists(const EmbeddingSet& set);

/// Row-wise softmax over -D with the diagonal excluded and forced to zero.
/// Stabilized by subtracting each row's off-diagonal maximum of -D, so
/// saturated distances (1e6 and beyond) cannot underflow a whole row.
/// Requires N >= 2.
Matrix selection_probs(const Matrix& sq_dists);

/// Expected number of correctly classified points: the total selection
/// probability mass sitting on same-class pairs. Lies in [0, N].
double nca_objective(const Matrix& probs, const std::vector<int>& labels);

/// Gradient of the objective with respect to every embedding (N x m).
/// The objective is maximized; callers minimizing must negate.
Matrix nca_grad(const EmbeddingSet& set);

/// Objective and gradient in one pass over the probability matrix.
struct NcaEval {
    double objective = 0.0;
    Matrix grad;
};
NcaEval nca_objective_and_grad(const EmbeddingSet& set);

/// Average probability that a point is correctly classified by the
/// stochastic neighbour classifier: nca_objective / N.
double stochastic_accuracy(const EmbeddingSet& set);

/// Same measure for query points classified against a separate reference
/// set (softmax over distances to all references, no self-exclusion).
double stochastic_accuracy(const EmbeddingSet& reference, const EmbeddingSet& queries);

}  // namespace seqnca
