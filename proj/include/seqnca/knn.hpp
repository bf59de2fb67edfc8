#pragma once

#include <span>
#include <vector>

#include "seqnca/matrix.hpp"
#include "seqnca/nca.hpp"

namespace seqnca {

/// Exact brute-force nearest-neighbour search over reference embeddings.
/// Results are ordered by nondecreasing squared distance, ties broken by
/// lower reference index. Immutable after construction.
class NeighbourIndex {
public:
    NeighbourIndex(Matrix embeddings, std::vector<int> labels);
    explicit NeighbourIndex(const EmbeddingSet& set)
        : NeighbourIndex(set.embeddings, set.labels) {}

    struct Hit {
        double sq_dist;
        std::size_t index;
    };

    /// The k nearest references, sorted.
    std::vector<Hit> query(std::span<const double> point, std::size_t k) const;

    std::size_t size() const { return embeddings_.rows(); }
    std::size_t dim() const { return embeddings_.cols(); }
    const std::vector<int>& labels() const { return labels_; }

private:
    Matrix embeddings_;
    std::vector<int> labels_;
};

/// Majority vote over the k nearest neighbours. A vote tie goes to the tied
/// class whose nearest representative comes first in distance order.
int knn_classify(const NeighbourIndex& index, std::span<const double> point, std::size_t k);

/// Fraction of test points whose kNN vote (train embeddings as reference)
/// matches their own label.
double nn_accuracy(const EmbeddingSet& train, const EmbeddingSet& test, std::size_t k);

}  // namespace seqnca
