#include "seqnca/search.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "seqnca/errors.hpp"

namespace seqnca {

const char* to_string(SelectBy s) {
    return s == SelectBy::train ? "train" : "validation";
}

SelectBy select_by_from_string(std::string_view name) {
    if (name == "train") return SelectBy::train;
    if (name == "validation") return SelectBy::validation;
    throw std::invalid_argument("unknown selection metric: " + std::string(name));
}

void SearchSpace::validate() const {
    const auto need = [](bool nonempty, const char* what) {
        if (!nonempty) throw ConfigError(std::string("search space: empty ") + what + " list");
    };
    need(!model_kinds.empty(), "model");
    need(!hidden_counts.empty(), "hidden_count");
    need(!embedding_dims.empty(), "embedding_dim");
    need(!transfers.empty(), "transfer");
    need(!pools.empty(), "pool");
    need(!optimizers.empty(), "optimizer");
    need(!learning_rates.empty(), "learning_rate");
    need(!momenta.empty(), "momentum");
    need(!delta0s.empty(), "rprop_delta0");
    need(!preprocess_modes.empty(), "preprocess");
    need(!batch_sizes.empty(), "batch_size");

    // every sampled combination must itself be a valid TrainConfig, so the
    // shared knobs are checked once through a throwaway config
    TrainConfig probe;
    probe.max_epochs = max_epochs;
    probe.patience = patience;
    probe.validation_fraction = validation_fraction;
    probe.grad_clip = grad_clip;
    probe.validate();
}

namespace {

// modulo pick: biased in theory, deterministic across standard libraries in
// practice, which is what reproducible searches need
template <typename T>
const T& pick(const std::vector<T>& list, std::mt19937_64& rng) {
    return list[static_cast<std::size_t>(rng() % list.size())];
}

TrainConfig sample_config(const SearchSpace& space, std::mt19937_64& rng) {
    TrainConfig config;
    config.model_kind = pick(space.model_kinds, rng);
    config.hidden_count = pick(space.hidden_counts, rng);
    config.embedding_dim = pick(space.embedding_dims, rng);
    config.transfer_kind = pick(space.transfers, rng);
    config.pool_kind = pick(space.pools, rng);
    config.optimizer = pick(space.optimizers, rng);
    config.sgd.learning_rate = pick(space.learning_rates, rng);
    config.sgd.momentum = pick(space.momenta, rng);
    config.rprop.delta0 = pick(space.delta0s, rng);
    config.rprop.delta_max = std::max(config.rprop.delta_max, config.rprop.delta0);
    config.preprocess = pick(space.preprocess_modes, rng);
    config.batch_size = pick(space.batch_sizes, rng);
    config.max_epochs = space.max_epochs;
    config.patience = space.patience;
    config.validation_fraction = space.validation_fraction;
    config.grad_clip = space.grad_clip;
    config.seed = rng();
    return config;
}

}  // namespace

SearchResult random_search(const SearchSpace& space, std::size_t n_trials,
                           const LabeledDataset& data, std::uint64_t seed) {
    space.validate();
    if (n_trials == 0) throw ConfigError("random search needs at least one trial");

    std::mt19937_64 rng(seed);
    SearchResult result;
    result.trials.reserve(n_trials);

    double best_metric = -1.0;
    bool have_best = false;
    for (std::size_t i = 0; i < n_trials; ++i) {
        TrialResult trial;
        trial.index = i;
        trial.config = sample_config(space, rng);

        const auto start = std::chrono::steady_clock::now();
        try {
            TrainReport report = train(trial.config, data);
            const EpochStats& best = report.history[report.best_epoch];
            trial.train_accuracy = best.train_accuracy;
            trial.val_accuracy = best.val_accuracy;
            trial.best_epoch = report.best_epoch;
            trial.epochs_run = report.history.size();

            const double metric = space.select_by == SelectBy::train ? trial.train_accuracy
                                                                     : trial.val_accuracy;
            if (!have_best || metric > best_metric) {
                have_best = true;
                best_metric = metric;
                result.best_index = i;
                result.best_report = std::move(report);
            }
        } catch (const std::exception& e) {
            trial.failed = true;
            trial.error = e.what();
        }
        trial.seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.trials.push_back(std::move(trial));
    }

    if (!have_best) throw DivergenceError("every search trial failed");
    return result;
}

}  // namespace seqnca
