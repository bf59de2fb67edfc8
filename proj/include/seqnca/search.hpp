#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "seqnca/trainer.hpp"

namespace seqnca {

enum class SelectBy { train, validation };

const char* to_string(SelectBy s);
SelectBy select_by_from_string(std::string_view name);

/// Candidate lists for the searched hyperparameters plus fixed settings for
/// the rest. Every list must be nonempty; single-element lists pin a
/// dimension.
struct SearchSpace {
    std::vector<ModelKind> model_kinds = {ModelKind::rnn, ModelKind::lstm};
    std::vector<std::size_t> hidden_counts = {5, 10, 20};
    std::vector<std::size_t> embedding_dims = {2};
    std::vector<Transfer> transfers = {Transfer::tanh, Transfer::sigmoid};
    std::vector<PoolKind> pools = {PoolKind::sum, PoolKind::mean, PoolKind::max};
    std::vector<OptimizerKind> optimizers = {OptimizerKind::rprop};
    std::vector<double> learning_rates = {0.01};
    std::vector<double> momenta = {0.9};
    std::vector<double> delta0s = {0.01};
    std::vector<PreprocessMode> preprocess_modes = {PreprocessMode{}};
    std::vector<std::size_t> batch_sizes = {50};

    // fixed per-trial settings
    std::size_t max_epochs = 150;
    std::size_t patience = 20;
    double validation_fraction = 0.15;
    double grad_clip = 0.0;
    SelectBy select_by = SelectBy::train;

    void validate() const;  // throws ConfigError
};

struct TrialResult {
    std::size_t index = 0;
    TrainConfig config;
    bool failed = false;
    std::string error;
    double train_accuracy = 0.0;  // stochastic, at the best epoch
    double val_accuracy = 0.0;
    std::size_t best_epoch = 0;
    std::size_t epochs_run = 0;
    double seconds = 0.0;
};

struct SearchResult {
    std::vector<TrialResult> trials;
    std::size_t best_index = 0;  // into trials
    TrainReport best_report;     // full report (with parameters) of the winner

    const TrialResult& best() const { return trials[best_index]; }
};

/// Sample n_trials configurations uniformly from the space, train each, and
/// rank by the selection metric (training-set stochastic accuracy by
/// default). Deterministic given the seed: sampled configs, derived trial
/// seeds and results are all reproducible. Trial failures are recorded in
/// the results, never fatal; throws only if every trial failed.
SearchResult random_search(const SearchSpace& space, std::size_t n_trials,
                           const LabeledDataset& data, std::uint64_t seed);

}  // namespace seqnca
