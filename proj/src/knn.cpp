#include "seqnca/knn.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>

namespace seqnca {

NeighbourIndex::NeighbourIndex(Matrix embeddings, std::vector<int> labels)
    : embeddings_(std::move(embeddings)), labels_(std::move(labels)) {
    if (labels_.size() != embeddings_.rows())
        throw std::invalid_argument("NeighbourIndex: " + std::to_string(labels_.size()) +
                                    " labels for " + std::to_string(embeddings_.rows()) +
                                    " embeddings");
    if (embeddings_.rows() == 0)
        throw std::invalid_argument("NeighbourIndex: empty reference set");
}

std::vector<NeighbourIndex::Hit> NeighbourIndex::query(std::span<const double> point,
                                                       std::size_t k) const {
    if (point.size() != dim())
        throw std::invalid_argument("NeighbourIndex::query: point dimension " +
                                    std::to_string(point.size()) + " vs index dimension " +
                                    std::to_string(dim()));
    if (k < 1 || k > size())
        throw std::invalid_argument("NeighbourIndex::query: k=" + std::to_string(k) +
                                    " out of range [1, " + std::to_string(size()) + "]");

    std::vector<Hit> hits(size());
    for (std::size_t i = 0; i < size(); ++i) {
        const auto row = embeddings_.row(i);
        double d = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
            const double diff = point[j] - row[j];
            d += diff * diff;
        }
        hits[i] = {d, i};
    }
    const auto closer = [](const Hit& a, const Hit& b) {
        return a.sq_dist < b.sq_dist || (a.sq_dist == b.sq_dist && a.index < b.index);
    };
    std::nth_element(hits.begin(), hits.begin() + (k - 1), hits.end(), closer);
    hits.resize(k);
    std::sort(hits.begin(), hits.end(), closer);
    return hits;
}

int knn_classify(const NeighbourIndex& index, std::span<const double> point, std::size_t k) {
    const auto hits = index.query(point, k);

    std::map<int, std::size_t> votes;
    for (const auto& h : hits) ++votes[index.labels()[h.index]];
    std::size_t best_count = 0;
    for (const auto& [cls, count] : votes) best_count = std::max(best_count, count);

    // hits are distance-ordered, so the first class reaching the winning
    // count is the one with the nearest representative among tied classes
    for (const auto& h : hits)
        if (votes[index.labels()[h.index]] == best_count) return index.labels()[h.index];
    return index.labels()[hits.front().index];  // unreachable
}

double nn_accuracy(const EmbeddingSet& train, const EmbeddingSet& test, std::size_t k) {
    train.check();
    test.check();
    if (train.size() == 0 || test.size() == 0)
        throw std::invalid_argument("nn_accuracy: empty embedding set");
    NeighbourIndex index(train);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < test.size(); ++i)
        if (knn_classify(index, test.embeddings.row(i), k) == test.labels[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(test.size());
}

}  // namespace seqnca
