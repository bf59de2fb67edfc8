#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "seqnca/nca.hpp"
#include "support/gradcheck.hpp"

using namespace seqnca;

namespace {

EmbeddingSet make_set(const std::vector<Vector>& points, std::vector<int> labels) {
    EmbeddingSet set;
    set.embeddings = Matrix(points.size(), points[0].size());
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t d = 0; d < points[i].size(); ++d)
            set.embeddings(i, d) = points[i][d];
    set.labels = std::move(labels);
    return set;
}

EmbeddingSet random_set(std::size_t n, std::size_t m, int classes, std::mt19937_64& rng) {
    EmbeddingSet set;
    set.embeddings = gradcheck::random_matrix(n, m, rng);
    set.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i) set.labels[i] = static_cast<int>(rng() % classes);
    return set;
}

// reference objective computed the slow, obvious way
double naive_objective(const EmbeddingSet& set) {
    const std::size_t n = set.size();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = 0.0;
        double hit = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double d2 = 0.0;
            for (std::size_t d = 0; d < set.dim(); ++d) {
                const double diff = set.embeddings(i, d) - set.embeddings(j, d);
                d2 += diff * diff;
            }
            const double w = std::exp(-d2);
            z += w;
            if (set.labels[i] == set.labels[j]) hit += w;
        }
        total += hit / z;
    }
    return total;
}

}  // namespace

TEST_CASE("squared distances match hand values and the naive loop") {
    const EmbeddingSet triangle =
        make_set({{0.0, 0.0}, {3.0, 0.0}, {0.0, 4.0}}, {0, 0, 1});
    const Matrix d = pairwise_sq_dists(triangle);
    CHECK(d(0, 1) == 9.0);
    CHECK(d(0, 2) == 16.0);
    CHECK(d(1, 2) == 25.0);

    std::mt19937_64 rng(44);
    const EmbeddingSet set = random_set(5, 3, 2, rng);
    const Matrix fast = pairwise_sq_dists(set);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(fast(i, i) == 0.0);
        for (std::size_t j = 0; j < 5; ++j) {
            double d2 = 0.0;
            for (std::size_t k = 0; k < 3; ++k) {
                const double diff = set.embeddings(i, k) - set.embeddings(j, k);
                d2 += diff * diff;
            }
            CHECK(std::abs(fast(i, j) - d2) < 1e-10);
            CHECK(fast(i, j) >= 0.0);
            CHECK(fast(i, j) == fast(j, i));
        }
    }
}

TEST_CASE("coincident points keep distances at exactly zero") {
    const EmbeddingSet set = make_set({{0.5, -1.0}, {0.5, -1.0}}, {0, 1});
    const Matrix d = pairwise_sq_dists(set);
    CHECK(d(0, 1) == 0.0);
    CHECK(d(1, 0) == 0.0);
}

TEST_CASE("selection probabilities match a hand-built distance row") {
    // row 1 has off-diagonal distances 0 and ln 4, so the softmax weights
    // are 1 and 1/4: probabilities 0.8 and 0.2
    Matrix d(3, 3, 10.0);
    for (std::size_t i = 0; i < 3; ++i) d(i, i) = 0.0;
    d(1, 0) = 0.0;
    d(1, 2) = std::log(4.0);

    const Matrix p = selection_probs(d);
    CHECK(p(1, 0) == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(p(1, 2) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(p(1, 1) == 0.0);
}

TEST_CASE("with two points all selection mass goes to the other point") {
    const EmbeddingSet set = make_set({{0.0}, {123.0}}, {0, 1});
    const Matrix p = selection_probs(pairwise_sq_dists(set));
    CHECK(p(0, 1) == 1.0);
    CHECK(p(1, 0) == 1.0);
}

TEST_CASE("equidistant neighbours split the mass evenly") {
    // equilateral triangle: each point selects the other two with prob 1/2
    const double h = std::sqrt(3.0) / 2.0;
    const EmbeddingSet set = make_set({{0.0, 0.0}, {1.0, 0.0}, {0.5, h}}, {0, 0, 1});
    const Matrix p = selection_probs(pairwise_sq_dists(set));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) CHECK(p(i, j) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("selection probability rows are distributions") {
    std::mt19937_64 rng(45);
    const EmbeddingSet set = random_set(9, 2, 3, rng);
    const Matrix p = selection_probs(pairwise_sq_dists(set));
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(p(i, i) == 0.0);
        double row = 0.0;
        for (std::size_t j = 0; j < 9; ++j) {
            CHECK(p(i, j) >= 0.0);
            CHECK(p(i, j) <= 1.0);
            row += p(i, j);
        }
        CHECK(std::abs(row - 1.0) < 1e-10);
    }
}

TEST_CASE("objective matches hand values and the naive loop") {
    // all same class: every row contributes its full unit of mass
    const EmbeddingSet same = make_set({{0.0}, {1.0}, {2.0}}, {7, 7, 7});
    CHECK(nca_objective(selection_probs(pairwise_sq_dists(same)), same.labels) ==
          doctest::Approx(3.0).epsilon(1e-12));

    // all distinct classes: no same-class mass anywhere
    const EmbeddingSet distinct = make_set({{0.0}, {1.0}, {2.0}}, {0, 1, 2});
    CHECK(nca_objective(selection_probs(pairwise_sq_dists(distinct)), distinct.labels) ==
          0.0);

    std::mt19937_64 rng(46);
    for (int inst = 0; inst < 5; ++inst) {
        const EmbeddingSet set = random_set(6 + inst, 2, 3, rng);
        const NcaEval eval = nca_objective_and_grad(set);
        CHECK(eval.objective == doctest::Approx(naive_objective(set)).epsilon(1e-10));
        CHECK(eval.objective >= 0.0);
        CHECK(eval.objective <= static_cast<double>(set.size()));
    }
}

TEST_CASE("gradient vanishes when same-class points coincide") {
    // two tight clusters far apart, one per class: moving nothing helps
    const EmbeddingSet set =
        make_set({{0.0, 0.0}, {0.0, 0.0}, {50.0, 0.0}, {50.0, 0.0}}, {0, 0, 1, 1});
    const Matrix g = nca_grad(set);
    for (double v : g.flat()) CHECK(std::abs(v) < 1e-12);
}

TEST_CASE("nca gradients match finite differences on 50 random instances") {
    std::mt19937_64 rng(47);
    const std::size_t dims[] = {1, 2, 5};
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 3 + rng() % 10;
        const std::size_t m = dims[inst % 3];
        const EmbeddingSet set = random_set(n, m, 2 + static_cast<int>(rng() % 2), rng);

        const NcaEval eval = nca_objective_and_grad(set);
        Vector analytic = eval.grad.flat();
        const auto f = [&](const Vector& v) {
            EmbeddingSet probe = set;
            probe.embeddings.flat() = v;
            return nca_objective_and_grad(probe).objective;
        };
        // far-outlier points carry exponentially-vanishing gradients; the
        // step ladder keeps those coordinates out of the noise floor
        const double err = gradcheck::max_rel_error_ladder(
            f, set.embeddings.flat(), analytic, {1e-5, 1e-4, 1e-3, 1e-2}, 1e-5);
        CHECK(err < 1e-5);
    }
}

TEST_CASE("objective and gradient are translation invariant") {
    std::mt19937_64 rng(48);
    const EmbeddingSet set = random_set(7, 3, 3, rng);
    EmbeddingSet shifted = set;
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t d = 0; d < 3; ++d) shifted.embeddings(i, d) += 100.0 + 3.0 * d;

    const NcaEval a = nca_objective_and_grad(set);
    const NcaEval b = nca_objective_and_grad(shifted);
    CHECK(std::abs(a.objective - b.objective) < 1e-10);
    for (std::size_t i = 0; i < a.grad.size(); ++i)
        CHECK(std::abs(a.grad.flat()[i] - b.grad.flat()[i]) < 1e-10);
}

TEST_CASE("saturated distances do not produce NaN") {
    // points spaced 1000 apart give squared distances up to 4e6; the naive
    // softmax would underflow every row to 0/0
    const EmbeddingSet set =
        make_set({{0.0}, {1000.0}, {2000.0}}, {0, 1, 0});
    const NcaEval eval = nca_objective_and_grad(set);
    CHECK(std::isfinite(eval.objective));
    for (double v : eval.grad.flat()) CHECK(std::isfinite(v));

    const Matrix p = selection_probs(pairwise_sq_dists(set));
    for (std::size_t i = 0; i < 3; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < 3; ++j) row += p(i, j);
        CHECK(std::abs(row - 1.0) < 1e-10);
    }
    // the middle point is 1e6 closer (in squared distance) to each
    // neighbour than they are to each other, so its row concentrates
    CHECK(p(0, 1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("stochastic accuracy hits its extremes") {
    const EmbeddingSet pure = make_set({{0.0}, {0.1}, {10.0}, {10.1}}, {0, 0, 1, 1});
    CHECK(stochastic_accuracy(pure) == doctest::Approx(1.0).epsilon(1e-6));

    const EmbeddingSet wrong = make_set({{0.0}, {0.1}, {10.0}, {10.1}}, {0, 1, 0, 1});
    CHECK(stochastic_accuracy(wrong) == doctest::Approx(0.0).epsilon(1e-6));
}

TEST_CASE("cross-set stochastic accuracy matches a hand value") {
    // one query at 0 against references at 0 (class 0) and 1 (class 1):
    // weights e^0 and e^-1, so the correct-class share is 1/(1+e^-1)
    const EmbeddingSet refs = make_set({{0.0}, {1.0}}, {0, 1});
    const EmbeddingSet query = make_set({{0.0}}, {0});
    const double expected = 1.0 / (1.0 + std::exp(-1.0));
    CHECK(stochastic_accuracy(refs, query) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("embedding sets of fewer than two points are rejected") {
    const EmbeddingSet one = make_set({{1.0}}, {0});
    CHECK_THROWS_AS(nca_objective_and_grad(one), std::invalid_argument);
    EmbeddingSet mismatched = make_set({{1.0}, {2.0}}, {0, 1});
    mismatched.labels.pop_back();
    CHECK_THROWS_AS(mismatched.check(), std::invalid_argument);
}
