#include "seqnca/nca.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace seqnca {

void EmbeddingSet::check() const {
    if (labels.size() != embeddings.rows())
        throw std::invalid_argument("EmbeddingSet: " + std::to_string(labels.size()) +
                                    " labels for " + std::to_string(embeddings.rows()) +
                                    " embeddings");
}

Matrix pairwise_sq_dists(const EmbeddingSet& set) {
    set.check();
    const std::size_t n = set.size();
    const std::size_t m = set.dim();
    const Matrix& e = set.embeddings;

    Vector sq(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) sq[i] = squared_norm(e.row(i));

    Matrix d(n, n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const auto ea = e.row(a);
        for (std::size_t b = a + 1; b < n; ++b) {
            const auto eb = e.row(b);
            double ip = 0.0;
            for (std::size_t j = 0; j < m; ++j) ip += ea[j] * eb[j];
            const double v = std::max(0.0, sq[a] + sq[b] - 2.0 * ip);
            d(a, b) = v;
            d(b, a) = v;
        }
    }
    return d;
}

Matrix selection_probs(const Matrix& sq_dists) {
    const std::size_t n = sq_dists.rows();
    if (n < 2)
        throw std::invalid_argument("selection_probs: need at least 2 points, got " +
                                    std::to_string(n));

    Matrix p(n, n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        // off-diagonal max of -D, i.e. minus the smallest distance in the row
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < n; ++b)
            if (b != a) shift = std::max(shift, -sq_dists(a, b));

        double z = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == a) continue;
            const double v = std::exp(-sq_dists(a, b) - shift);
            p(a, b) = v;
            z += v;
        }
        for (std::size_t b = 0; b < n; ++b) p(a, b) /= z;
        p(a, a) = 0.0;
    }
    return p;
}

double nca_objective(const Matrix& probs, const std::vector<int>& labels) {
    if (labels.size() != probs.rows())
        throw std::invalid_argument("nca_objective: " + std::to_string(labels.size()) +
                                    " labels for a " + std::to_string(probs.rows()) + "x" +
                                    std::to_string(probs.cols()) + " probability matrix");
    double obj = 0.0;
    for (std::size_t a = 0; a < probs.rows(); ++a)
        for (std::size_t b = 0; b < probs.cols(); ++b)
            if (a != b && labels[a] == labels[b]) obj += probs(a, b);
    // summation noise must not push past the mathematical bounds [0, N]
    return std::clamp(obj, 0.0, static_cast<double>(probs.rows()));
}

NcaEval nca_objective_and_grad(const EmbeddingSet& set) {
    set.check();
    const std::size_t n = set.size();
    const std::size_t m = set.dim();
    const Matrix& e = set.embeddings;
    const Matrix p = selection_probs(pairwise_sq_dists(set));

    // per-point probability of a correct selection
    Vector correct(n, 0.0);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            if (a != b && set.labels[a] == set.labels[b]) correct[a] += p(a, b);

    NcaEval eval;
    for (double c : correct) eval.objective += c;
    eval.objective = std::clamp(eval.objective, 0.0, static_cast<double>(n));

    // dO/dd(i,j) = p_ij (P_i - [c_i = c_j]); both row directions contribute
    // through d(i,j) = ||e_i - e_j||^2.
    eval.grad = Matrix(n, m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto gi = eval.grad.row(i);
        const auto ei = e.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double same = set.labels[i] == set.labels[j] ? 1.0 : 0.0;
            const double w = p(i, j) * (correct[i] - same) + p(j, i) * (correct[j] - same);
            const auto ej = e.row(j);
            for (std::size_t k = 0; k < m; ++k) gi[k] += 2.0 * w * (ei[k] - ej[k]);
        }
    }
    return eval;
}

Matrix nca_grad(const EmbeddingSet& set) { return nca_objective_and_grad(set).grad; }

double stochastic_accuracy(const EmbeddingSet& set) {
    set.check();
    const double obj = nca_objective(selection_probs(pairwise_sq_dists(set)), set.labels);
    return obj / static_cast<double>(set.size());
}

double stochastic_accuracy(const EmbeddingSet& reference, const EmbeddingSet& queries) {
    reference.check();
    queries.check();
    if (reference.dim() != queries.dim())
        throw std::invalid_argument("stochastic_accuracy: embedding dimensions differ (" +
                                    std::to_string(reference.dim()) + " vs " +
                                    std::to_string(queries.dim()) + ")");
    const std::size_t n_ref = reference.size();
    const std::size_t m = queries.dim();

    double total = 0.0;
    Vector dists(n_ref);
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const auto eq = queries.embeddings.row(q);
        double shift = -std::numeric_limits<double>::infinity();
        for (std::size_t r = 0; r < n_ref; ++r) {
            const auto er = reference.embeddings.row(r);
            double d = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                const double diff = eq[k] - er[k];
                d += diff * diff;
            }
            dists[r] = d;
            shift = std::max(shift, -d);
        }
        double z = 0.0, hit = 0.0;
        for (std::size_t r = 0; r < n_ref; ++r) {
            const double v = std::exp(-dists[r] - shift);
            z += v;
            if (reference.labels[r] == queries.labels[q]) hit += v;
        }
        total += std::clamp(hit / z, 0.0, 1.0);
    }
    return total / static_cast<double>(queries.size());
}

}  // namespace seqnca
