#include "seqnca/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "seqnca/errors.hpp"
#include "seqnca/knn.hpp"

namespace seqnca {

const char* to_string(ModelKind kind) {
    return kind == ModelKind::rnn ? "rnn" : "lstm";
}

ModelKind model_from_string(std::string_view name) {
    if (name == "rnn") return ModelKind::rnn;
    if (name == "lstm") return ModelKind::lstm;
    throw std::invalid_argument("unknown model kind: " + std::string(name));
}

void TrainConfig::validate() const {
    if (hidden_count == 0) throw ConfigError("hidden_count must be positive");
    if (embedding_dim == 0) throw ConfigError("embedding_dim must be positive");
    if (batch_size < 2) throw ConfigError("batch_size must be at least 2");
    if (max_epochs == 0) throw ConfigError("max_epochs must be positive");
    if (patience == 0) throw ConfigError("patience must be positive");
    if (!(validation_fraction >= 0.0 && validation_fraction <= 0.5))
        throw ConfigError("validation_fraction must lie in [0, 0.5]");
    if (grad_clip < 0.0) throw ConfigError("grad_clip must be nonnegative");
    if (sgd.learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
    if (!(sgd.momentum >= 0.0 && sgd.momentum < 1.0))
        throw ConfigError("momentum must lie in [0, 1)");
    if (rprop.eta_plus <= 1.0) throw ConfigError("rprop eta_plus must exceed 1");
    if (!(rprop.eta_minus > 0.0 && rprop.eta_minus < 1.0))
        throw ConfigError("rprop eta_minus must lie in (0, 1)");
    if (!(rprop.delta_min > 0.0 && rprop.delta_min <= rprop.delta0 &&
          rprop.delta0 <= rprop.delta_max))
        throw ConfigError("rprop step sizes must satisfy 0 < delta_min <= delta0 <= delta_max");
}

namespace {

void init_uniform(Matrix& w, std::mt19937_64& rng) {
    const double r = 1.0 / std::sqrt(static_cast<double>(w.cols()));
    std::uniform_real_distribution<double> u(-r, r);
    for (double& v : w.flat()) v = u(rng);
}

}  // namespace

ModelParams init_params(const TrainConfig& config, std::size_t input_dim,
                        std::mt19937_64& rng) {
    if (input_dim == 0) throw DimensionError("cannot initialize a model for empty inputs");
    if (config.model_kind == ModelKind::rnn) {
        RnnParams p(input_dim, config.hidden_count, config.embedding_dim,
                    config.transfer_kind);
        init_uniform(p.w_xh, rng);
        init_uniform(p.w_hh, rng);
        init_uniform(p.w_ho, rng);
        return p;
    }
    LstmParams p(input_dim, config.hidden_count, config.embedding_dim);
    init_uniform(p.w_xa, rng);
    init_uniform(p.w_ha, rng);
    init_uniform(p.w_ho, rng);
    const std::size_t c = p.cell_count();
    for (std::size_t j = 0; j < c; ++j) p.b_a[2 * c + j] = 1.0;
    return p;
}

BatchEval batch_objective_and_grad(const ModelParams& params, PoolKind pool_kind,
                                   const LabeledDataset& data,
                                   const std::vector<std::size_t>& batch) {
    if (batch.size() < 2)
        throw std::invalid_argument("batch needs at least 2 sequences, got " +
                                    std::to_string(batch.size()));
    const std::size_t m = model_output_dim(params);

    std::vector<ForwardTrace> traces;
    traces.reserve(batch.size());
    EmbeddingSet set;
    set.embeddings = Matrix(batch.size(), m);
    set.labels.reserve(batch.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const std::size_t idx = batch[i];
        traces.push_back(model_forward(params, data.sequences[idx]));
        const Vector e = pool(pool_kind, traces.back().outputs);
        std::copy(e.begin(), e.end(), set.embeddings.row(i).begin());
        set.labels.push_back(data.labels[idx]);
    }

    const NcaEval nca = nca_objective_and_grad(set);

    BatchEval out;
    out.objective = nca.objective;
    out.grad.assign(param_count(params), 0.0);
    Vector scratch(out.grad.size());
    for (std::size_t i = 0; i < batch.size(); ++i) {
        const auto row = nca.grad.row(i);
        const Vector pooled_grad(row.begin(), row.end());
        const auto output_grads = pool_backward(pool_kind, traces[i].outputs, pooled_grad);
        const ModelParams g =
            model_backward(params, data.sequences[batch[i]], traces[i], output_grads);
        flatten(g, scratch);
        add_into(out.grad, scratch);
    }
    return out;
}

namespace {

EmbeddingSet embed_subset(const ModelParams& params, PoolKind pool_kind,
                          const LabeledDataset& data,
                          const std::vector<std::size_t>& indices) {
    const std::size_t m = model_output_dim(params);
    EmbeddingSet set;
    set.embeddings = Matrix(indices.size(), m);
    set.labels.reserve(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const ForwardTrace trace = model_forward(params, data.sequences[indices[i]]);
        const Vector e = pool(pool_kind, trace.outputs);
        std::copy(e.begin(), e.end(), set.embeddings.row(i).begin());
        set.labels.push_back(data.labels[indices[i]]);
    }
    return set;
}

void check_dims(const ModelParams& params, const LabeledDataset& data) {
    if (model_input_dim(params) != data.input_dim())
        throw DimensionError("model expects " + std::to_string(model_input_dim(params)) +
                             "-dimensional inputs, data has " +
                             std::to_string(data.input_dim()));
}

}  // namespace

TrainReport train(const TrainConfig& config, const LabeledDataset& data) {
    config.validate();
    data.check();
    if (data.size() < 2) throw DataError("training needs at least 2 sequences");
    for (int l : data.labels)
        if (l < 0) throw DataError("training data contains unlabeled sequences");

    TrainReport report;
    report.config = config;

    const std::set<int> distinct(data.labels.begin(), data.labels.end());
    if (distinct.size() < 2)
        report.warnings.push_back(
            "single-class data: the objective is constant-maximal and gradients vanish");

    auto prepared = preprocess(data, config.preprocess);
    const LabeledDataset& proc = prepared.first;
    report.preprocess = std::move(prepared.second);
    report.warnings.insert(report.warnings.end(), report.preprocess.warnings.begin(),
                           report.preprocess.warnings.end());

    std::mt19937_64 rng(config.seed);
    ModelParams params = init_params(config, proc.input_dim(), rng);
    Vector flat = flatten(params);
    Optimizer optimizer = config.optimizer == OptimizerKind::sgd
                              ? Optimizer::sgd(flat.size(), config.sgd)
                              : Optimizer::rprop(flat.size(), config.rprop);

    // held-out split for early stopping; the preprocessing statistics above
    // deliberately cover the whole file, matching what a later run on
    // separate test data will replay
    std::vector<std::size_t> order(proc.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    const auto val_count =
        static_cast<std::size_t>(config.validation_fraction * static_cast<double>(proc.size()));
    std::vector<std::size_t> val_indices(order.begin(), order.begin() + val_count);
    std::vector<std::size_t> train_indices(order.begin() + val_count, order.end());
    if (train_indices.size() < 2)
        throw DataError("training split has fewer than 2 sequences; lower "
                        "validation_fraction or provide more data");

    double best_val = -1.0;
    Vector grad_scratch;
    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();
        const auto batches = make_batches(train_indices.size(), config.batch_size, rng());

        EpochStats stats;
        for (const auto& chunk : batches) {
            std::vector<std::size_t> batch(chunk.size());
            for (std::size_t i = 0; i < chunk.size(); ++i) batch[i] = train_indices[chunk[i]];

            BatchEval eval = batch_objective_and_grad(params, config.pool_kind, proc, batch);
            if (std::isnan(eval.objective))
                throw DivergenceError("objective became NaN at epoch " +
                                      std::to_string(epoch));
            stats.objective += eval.objective;

            if (config.grad_clip > 0.0) {
                const double norm = std::sqrt(squared_norm(eval.grad));
                if (norm > config.grad_clip) {
                    const double scale = config.grad_clip / norm;
                    for (double& g : eval.grad) g *= scale;
                }
            }
            optimizer.step(flat, eval.grad);
            unflatten(params, flat);
            for (double v : flat)
                if (!std::isfinite(v) || std::abs(v) > 1e6)
                    throw DivergenceError("parameters diverged at epoch " +
                                          std::to_string(epoch));
        }
        stats.objective_rate = stats.objective / static_cast<double>(train_indices.size());

        const EmbeddingSet train_set =
            embed_subset(params, config.pool_kind, proc, train_indices);
        stats.train_accuracy = stochastic_accuracy(train_set);
        if (val_indices.empty()) {
            stats.val_accuracy = stats.train_accuracy;
        } else {
            const EmbeddingSet val_set =
                embed_subset(params, config.pool_kind, proc, val_indices);
            stats.val_accuracy = stochastic_accuracy(train_set, val_set);
        }
        stats.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        report.history.push_back(stats);

        if (stats.val_accuracy > best_val) {
            best_val = stats.val_accuracy;
            report.best_epoch = epoch;
            report.params = params;
        }
        if (epoch - report.best_epoch >= config.patience) break;
    }
    return report;
}

EmbeddingSet embed_dataset(const ModelParams& params, PoolKind pool_kind,
                           const LabeledDataset& data) {
    data.check();
    if (data.size() == 0) throw DataError("cannot embed an empty dataset");
    check_dims(params, data);
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    return embed_subset(params, pool_kind, data, all);
}

EvalMetrics evaluate(const ModelParams& params, PoolKind pool_kind,
                     const LabeledDataset& train, const LabeledDataset& test,
                     std::size_t k) {
    for (int l : train.labels)
        if (l < 0) throw DataError("evaluation needs fully labeled training data");
    for (int l : test.labels)
        if (l < 0) throw DataError("evaluation needs fully labeled test data");
    const EmbeddingSet train_set = embed_dataset(params, pool_kind, train);
    const EmbeddingSet test_set = embed_dataset(params, pool_kind, test);
    EvalMetrics metrics;
    metrics.stochastic_train = stochastic_accuracy(train_set);
    metrics.stochastic_test = stochastic_accuracy(train_set, test_set);
    metrics.knn_test = nn_accuracy(train_set, test_set, k);
    return metrics;
}

}  // namespace seqnca
