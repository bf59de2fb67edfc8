#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "seqnca/dataset.hpp"
#include "seqnca/models.hpp"
#include "seqnca/nca.hpp"
#include "seqnca/optim.hpp"
#include "seqnca/pooling.hpp"

namespace seqnca {

enum class ModelKind { rnn, lstm };

const char* to_string(ModelKind kind);
ModelKind model_from_string(std::string_view name);

/// Everything a training run depends on. transfer_kind only applies to the
/// rnn model; the lstm gating functions are fixed.
struct TrainConfig {
    ModelKind model_kind = ModelKind::lstm;
    std::size_t hidden_count = 10;
    std::size_t embedding_dim = 2;
    Transfer transfer_kind = Transfer::tanh;
    PoolKind pool_kind = PoolKind::mean;
    OptimizerKind optimizer = OptimizerKind::rprop;
    SgdConfig sgd;
    RpropConfig rprop;
    PreprocessMode preprocess;
    std::size_t batch_size = 50;
    std::size_t max_epochs = 200;
    std::size_t patience = 25;
    double validation_fraction = 0.15;
    std::uint64_t seed = 1;
    double grad_clip = 0.0;  // global-norm threshold; 0 disables clipping

    void validate() const;  // throws ConfigError
};

struct EpochStats {
    double objective = 0.0;       // O summed over the epoch's batches
    double objective_rate = 0.0;  // objective / number of training sequences
    double train_accuracy = 0.0;  // stochastic accuracy on the training split
    double val_accuracy = 0.0;    // on the held-out split; train value when no split
    double seconds = 0.0;
};

struct TrainReport {
    TrainConfig config;
    std::vector<EpochStats> history;
    std::size_t best_epoch = 0;
    ModelParams params;  // snapshot from the best validation epoch
    PreprocessStats preprocess;
    std::vector<std::string> warnings;
};

/// Weights ~ uniform(-r, r) with r = 1/sqrt(fan-in), biases zero, initial
/// states zero; the lstm forget-gate bias starts at +1 to keep the carry
/// path open early in training.
ModelParams init_params(const TrainConfig& config, std::size_t input_dim,
                        std::mt19937_64& rng);

/// Objective and flat accumulated parameter gradient for one batch of
/// sequence indices: forward every sequence, pool, evaluate the
/// neighbourhood objective over the batch embeddings, and push the
/// embedding gradients back through pooling and the model. This is exactly
/// one gradient computation of the training loop, exposed separately so it
/// can be checked against finite differences of the full composition.
struct BatchEval {
    double objective = 0.0;
    Vector grad;  // same layout as flatten(params)
};
BatchEval batch_objective_and_grad(const ModelParams& params, PoolKind pool_kind,
                                   const LabeledDataset& data,
                                   const std::vector<std::size_t>& batch);

/// Full training run: preprocess, split off a validation set, iterate
/// shuffled batches with one ascent step each, early-stop when the
/// validation stochastic accuracy stops improving, and hand back the
/// parameters of the best validation epoch.
TrainReport train(const TrainConfig& config, const LabeledDataset& data);

/// One pooled m-vector per sequence, order-preserving.
EmbeddingSet embed_dataset(const ModelParams& params, PoolKind pool_kind,
                           const LabeledDataset& data);

struct EvalMetrics {
    double stochastic_train = 0.0;
    double stochastic_test = 0.0;
    double knn_test = 0.0;
};

/// Embed both sets and measure stochastic accuracy on each plus kNN test
/// accuracy with the train embeddings as reference.
EvalMetrics evaluate(const ModelParams& params, PoolKind pool_kind,
                     const LabeledDataset& train, const LabeledDataset& test,
                     std::size_t k);

}  // namespace seqnca
