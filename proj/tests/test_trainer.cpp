#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "seqnca/errors.hpp"
#include "seqnca/synthdata.hpp"
#include "seqnca/trainer.hpp"
#include "support/gradcheck.hpp"

using namespace seqnca;

namespace {

LabeledDataset random_dataset(std::size_t n, std::size_t dim, std::size_t min_len,
                              std::size_t max_len, int classes, std::mt19937_64& rng) {
    LabeledDataset data;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t len = min_len + rng() % (max_len - min_len + 1);
        data.sequences.push_back(gradcheck::random_sequence(len, dim, rng));
        data.labels.push_back(static_cast<int>(i) % classes);
    }
    for (int c = 0; c < classes; ++c) data.class_names.push_back(std::to_string(c + 1));
    return data;
}

std::vector<std::size_t> all_indices(std::size_t n) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
}

}  // namespace

TEST_CASE("config validation rejects out-of-range values") {
    TrainConfig good;
    good.validate();

    TrainConfig c = good;
    c.hidden_count = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.embedding_dim = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.batch_size = 1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.validation_fraction = 0.6;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.validation_fraction = -0.1;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.sgd.learning_rate = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.sgd.momentum = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.rprop.eta_plus = 1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.rprop.eta_minus = 0.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.rprop.delta0 = 2.0;  // above delta_max
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.grad_clip = -1.0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
    c = good;
    c.max_epochs = 0;
    CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("initial parameters have the right shapes and scales") {
    std::mt19937_64 rng(53);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 6;
    config.embedding_dim = 3;

    const ModelParams rp = init_params(config, 2, rng);
    const auto& rnn = std::get<RnnParams>(rp);
    CHECK(rnn.input_dim() == 2);
    CHECK(rnn.hidden_count() == 6);
    CHECK(rnn.output_dim() == 3);
    CHECK(rnn.h0 == Vector(6, 0.0));
    CHECK(rnn.b_h == Vector(6, 0.0));
    const double r_in = 1.0 / std::sqrt(2.0);
    for (double w : rnn.w_xh.flat()) CHECK(std::abs(w) <= r_in);
    const double r_hh = 1.0 / std::sqrt(6.0);
    for (double w : rnn.w_hh.flat()) CHECK(std::abs(w) <= r_hh);
    CHECK(squared_norm(flatten(rp)) > 0.0);

    config.model_kind = ModelKind::lstm;
    const ModelParams lp = init_params(config, 2, rng);
    const auto& lstm = std::get<LstmParams>(lp);
    CHECK(lstm.cell_count() == 6);
    CHECK(lstm.h0 == Vector(6, 0.0));
    CHECK(lstm.s0 == Vector(6, 0.0));
    for (std::size_t j = 0; j < 6; ++j) {
        CHECK(lstm.b_a[2 * 6 + j] == 1.0);  // forget gate starts open
        CHECK(lstm.b_a[j] == 0.0);
        CHECK(lstm.b_a[6 + j] == 0.0);
        CHECK(lstm.b_a[3 * 6 + j] == 0.0);
    }
}

TEST_CASE("the full pipeline gradient matches finite differences") {
    // every model/transfer/pooling combination, checked through the whole
    // composition: recurrent forward -> pooling -> neighbourhood objective
    std::mt19937_64 rng(54);

    struct Combo {
        ModelKind model;
        Transfer transfer;
    };
    const Combo combos[] = {{ModelKind::rnn, Transfer::sigmoid},
                            {ModelKind::rnn, Transfer::tanh},
                            {ModelKind::rnn, Transfer::relu},
                            {ModelKind::lstm, Transfer::tanh}};

    for (const Combo& combo : combos) {
        for (PoolKind pool : {PoolKind::sum, PoolKind::mean, PoolKind::max}) {
            for (std::size_t n : {3, 5}) {
                for (std::size_t max_len : {4, 9}) {
                    TrainConfig config;
                    config.model_kind = combo.model;
                    config.transfer_kind = combo.transfer;
                    config.hidden_count = 4;
                    config.embedding_dim = 2;
                    const LabeledDataset data =
                        random_dataset(n, 2, 2, max_len, 2, rng);
                    const ModelParams params = init_params(config, 2, rng);
                    const std::vector<std::size_t> batch = all_indices(n);

                    const BatchEval eval =
                        batch_objective_and_grad(params, pool, data, batch);
                    const auto f = [&](const Vector& v) {
                        ModelParams p = params;
                        unflatten(p, v);
                        return batch_objective_and_grad(p, pool, data, batch).objective;
                    };
                    // the step ladder absorbs rounding noise on the
                    // translation-invariant directions (see gradcheck.hpp)
                    const double err = gradcheck::max_rel_error_ladder(
                        f, flatten(params), eval.grad,
                        {1e-5, 3e-5, 1e-4, 3e-4, 1e-3, 1e-2, 1e-1}, 1e-4);
                    CAPTURE(static_cast<int>(combo.model));
                    CAPTURE(static_cast<int>(pool));
                    CHECK(err < 1e-4);
                }
            }
        }
    }
}

TEST_CASE("batches of fewer than two sequences are rejected") {
    std::mt19937_64 rng(55);
    const LabeledDataset data = random_dataset(3, 1, 3, 3, 2, rng);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    const ModelParams params = init_params(config, 1, rng);
    CHECK_THROWS_AS(batch_objective_and_grad(params, PoolKind::mean, data, {0}),
                    std::invalid_argument);
}

TEST_CASE("training overfits a tiny synthetic problem") {
    const LabeledDataset data = make_sine_micro(10, 10, 7);

    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 8;
    config.embedding_dim = 2;
    config.pool_kind = PoolKind::mean;
    config.optimizer = OptimizerKind::rprop;
    config.batch_size = 20;  // full batch
    config.max_epochs = 500;
    config.patience = 500;
    config.validation_fraction = 0.0;
    config.seed = 11;

    const TrainReport report = train(config, data);
    double best = 0.0;
    for (const EpochStats& e : report.history) best = std::max(best, e.objective);
    CHECK(best >= 19.0);  // out of 20
}

TEST_CASE("two same-class sequences saturate the objective immediately") {
    LabeledDataset data;
    data.sequences = {Sequence::univariate({1.0, 2.0}), Sequence::univariate({1.5, 0.5})};
    data.labels = {0, 0};
    data.class_names = {"1"};

    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 2;
    config.batch_size = 2;
    config.max_epochs = 3;
    config.patience = 10;
    config.validation_fraction = 0.0;

    const TrainReport report = train(config, data);
    // each point's only neighbour has the same class, so O == N exactly
    for (const EpochStats& e : report.history) {
        CHECK(e.objective == 2.0);
        CHECK(e.train_accuracy == 1.0);
    }
    const bool warned =
        std::any_of(report.warnings.begin(), report.warnings.end(),
                    [](const std::string& w) { return w.find("class") != std::string::npos; });
    CHECK(warned);
}

TEST_CASE("training twice with one seed gives identical histories") {
    const LabeledDataset data = make_sine_micro(6, 8, 3);
    TrainConfig config;
    config.model_kind = ModelKind::lstm;
    config.hidden_count = 3;
    config.batch_size = 4;
    config.max_epochs = 6;
    config.patience = 6;
    config.seed = 21;

    const TrainReport a = train(config, data);
    const TrainReport b = train(config, data);
    REQUIRE(a.history.size() == b.history.size());
    for (std::size_t i = 0; i < a.history.size(); ++i) {
        CHECK(a.history[i].objective == b.history[i].objective);
        CHECK(a.history[i].train_accuracy == b.history[i].train_accuracy);
        CHECK(a.history[i].val_accuracy == b.history[i].val_accuracy);
    }
    CHECK(flatten(a.params) == flatten(b.params));
    CHECK(a.best_epoch == b.best_epoch);
}

TEST_CASE("a stalled validation accuracy stops training after patience epochs") {
    // single-class data pins the objective at its ceiling, so epoch 0 is
    // never beaten and early stopping fires as soon as patience runs out
    std::mt19937_64 rng(56);
    LabeledDataset data = random_dataset(8, 1, 4, 6, 1, rng);

    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 2;
    config.batch_size = 8;
    config.max_epochs = 100;
    config.patience = 5;
    config.validation_fraction = 0.25;
    const TrainReport report = train(config, data);
    CHECK(report.best_epoch == 0);
    CHECK(report.history.size() == 6);  // epoch 0 plus patience more
}

TEST_CASE("the reported parameters are the best-epoch snapshot") {
    const LabeledDataset data = make_sine_micro(8, 8, 5);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 4;
    config.batch_size = 16;
    config.max_epochs = 15;
    config.patience = 15;
    config.validation_fraction = 0.0;
    config.preprocess.scope = PreprocessScope::none;
    config.seed = 31;

    const TrainReport report = train(config, data);
    REQUIRE(report.best_epoch < report.history.size());

    // re-embedding the data with the returned params must reproduce the
    // best epoch's training accuracy
    const EmbeddingSet embedded = embed_dataset(report.params, config.pool_kind, data);
    const double acc = stochastic_accuracy(embedded);
    CHECK(acc == doctest::Approx(report.history[report.best_epoch].train_accuracy)
                     .epsilon(1e-12));

    double best_val = -1.0;
    for (const EpochStats& e : report.history) best_val = std::max(best_val, e.val_accuracy);
    CHECK(report.history[report.best_epoch].val_accuracy == best_val);
}

TEST_CASE("unlabeled or degenerate training data is rejected") {
    TrainConfig config;
    LabeledDataset unlabeled;
    unlabeled.sequences = {Sequence::univariate({1.0}), Sequence::univariate({2.0})};
    unlabeled.labels = {-1, 0};
    unlabeled.class_names = {"1"};
    CHECK_THROWS_AS(train(config, unlabeled), DataError);

    LabeledDataset single;
    single.sequences = {Sequence::univariate({1.0})};
    single.labels = {0};
    single.class_names = {"1"};
    CHECK_THROWS_AS(train(config, single), DataError);
}

TEST_CASE("embedding a dataset applies model and pooling per sequence") {
    // zero-weight rnn outputs b_o every step, so sum pooling yields T * b_o
    RnnParams p(1, 2, 2, Transfer::tanh);
    p.b_o = {0.5, -1.0};
    LabeledDataset data;
    data.sequences = {Sequence::univariate({1.0, 2.0, 3.0}),
                      Sequence::univariate({4.0, 5.0})};
    data.labels = {0, 1};
    data.class_names = {"1", "2"};

    const EmbeddingSet set = embed_dataset(ModelParams(p), PoolKind::sum, data);
    REQUIRE(set.size() == 2);
    CHECK(set.embeddings(0, 0) == 1.5);
    CHECK(set.embeddings(0, 1) == -3.0);
    CHECK(set.embeddings(1, 0) == 1.0);
    CHECK(set.embeddings(1, 1) == -2.0);
    CHECK(set.labels == data.labels);
}

TEST_CASE("duplicate sequences embed identically") {
    std::mt19937_64 rng(57);
    TrainConfig config;
    config.model_kind = ModelKind::lstm;
    config.hidden_count = 3;
    const ModelParams params = init_params(config, 1, rng);

    LabeledDataset data;
    const Sequence s = gradcheck::random_sequence(6, 1, rng);
    data.sequences = {s, s};
    data.labels = {0, 1};
    data.class_names = {"1", "2"};
    const EmbeddingSet set = embed_dataset(params, PoolKind::max, data);
    for (std::size_t d = 0; d < set.dim(); ++d)
        CHECK(set.embeddings(0, d) == set.embeddings(1, d));
}

TEST_CASE("embedding data of the wrong dimension fails") {
    std::mt19937_64 rng(58);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    const ModelParams params = init_params(config, 2, rng);
    LabeledDataset data;
    data.sequences = {Sequence::univariate({1.0, 2.0})};
    data.labels = {0};
    data.class_names = {"1"};
    CHECK_THROWS_AS(embed_dataset(params, PoolKind::mean, data), DimensionError);
}

TEST_CASE("evaluation of the training set against itself is perfect at k=1") {
    std::mt19937_64 rng(59);
    const LabeledDataset data = make_sine_micro(6, 8, 9);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    config.hidden_count = 4;
    const ModelParams params = init_params(config, 1, rng);

    const EvalMetrics metrics = evaluate(params, PoolKind::mean, data, data, 1);
    CHECK(metrics.knn_test == 1.0);  // every query finds itself at distance zero
    CHECK(metrics.stochastic_train > 0.0);
    // the cross-set measure sees the query among the references, so it can
    // only look better than the leave-one-out training measure
    CHECK(metrics.stochastic_test >= metrics.stochastic_train);
}

TEST_CASE("evaluation refuses unlabeled data") {
    std::mt19937_64 rng(60);
    TrainConfig config;
    config.model_kind = ModelKind::rnn;
    const ModelParams params = init_params(config, 1, rng);
    LabeledDataset data;
    data.sequences = {Sequence::univariate({1.0}), Sequence::univariate({2.0})};
    data.labels = {0, -1};
    data.class_names = {"1"};
    LabeledDataset good;
    good.sequences = data.sequences;
    good.labels = {0, 1};
    good.class_names = {"1", "2"};
    CHECK_THROWS_AS(evaluate(params, PoolKind::mean, data, good, 1), DataError);
    CHECK_THROWS_AS(evaluate(params, PoolKind::mean, good, data, 1), DataError);
}

TEST_CASE("model names round-trip") {
    for (ModelKind kind : {ModelKind::rnn, ModelKind::lstm})
        CHECK(model_from_string(to_string(kind)) == kind);
    CHECK_THROWS_AS(model_from_string("gru"), std::invalid_argument);
}
