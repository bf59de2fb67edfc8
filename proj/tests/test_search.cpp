#include <doctest.h>

#include <set>
#include <stdexcept>

#include "seqnca/errors.hpp"
#include "seqnca/search.hpp"
#include "seqnca/synthdata.hpp"

using namespace seqnca;

namespace {

// a space small and cheap enough for unit tests
SearchSpace tiny_space() {
    SearchSpace space;
    space.model_kinds = {ModelKind::rnn};
    space.hidden_counts = {2, 4};
    space.embedding_dims = {2};
    space.transfers = {Transfer::tanh};
    space.pools = {PoolKind::mean, PoolKind::sum};
    space.optimizers = {OptimizerKind::rprop};
    space.batch_sizes = {10};
    space.max_epochs = 4;
    space.patience = 4;
    space.validation_fraction = 0.2;
    return space;
}

bool same_config(const TrainConfig& a, const TrainConfig& b) {
    return a.model_kind == b.model_kind && a.hidden_count == b.hidden_count &&
           a.embedding_dim == b.embedding_dim && a.transfer_kind == b.transfer_kind &&
           a.pool_kind == b.pool_kind && a.optimizer == b.optimizer &&
           a.batch_size == b.batch_size && a.seed == b.seed &&
           a.sgd.learning_rate == b.sgd.learning_rate && a.rprop.delta0 == b.rprop.delta0;
}

}  // namespace

TEST_CASE("a single-trial search returns that trial as the winner") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    const SearchResult result = random_search(tiny_space(), 1, data, 4);
    REQUIRE(result.trials.size() == 1);
    CHECK(result.best_index == 0);
    CHECK(!result.trials[0].failed);
    CHECK(result.trials[0].epochs_run >= 1);
    CHECK(result.trials[0].train_accuracy > 0.0);
    CHECK(result.best().train_accuracy == result.trials[0].train_accuracy);
}

TEST_CASE("searches with the same seed reproduce trial for trial") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    const SearchResult a = random_search(tiny_space(), 4, data, 17);
    const SearchResult b = random_search(tiny_space(), 4, data, 17);
    REQUIRE(a.trials.size() == b.trials.size());
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        CHECK(same_config(a.trials[i].config, b.trials[i].config));
        CHECK(a.trials[i].train_accuracy == b.trials[i].train_accuracy);
        CHECK(a.trials[i].val_accuracy == b.trials[i].val_accuracy);
        CHECK(a.trials[i].best_epoch == b.trials[i].best_epoch);
    }
    CHECK(a.best_index == b.best_index);
    CHECK(flatten(a.best_report.params) == flatten(b.best_report.params));
}

TEST_CASE("trial seeds differ so repeated configs explore different inits") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    SearchSpace space = tiny_space();
    space.hidden_counts = {3};
    space.pools = {PoolKind::mean};  // a fully pinned space
    const SearchResult result = random_search(space, 5, data, 23);
    std::set<std::uint64_t> seeds;
    for (const TrialResult& t : result.trials) seeds.insert(t.config.seed);
    CHECK(seeds.size() == 5);
}

TEST_CASE("every sampled value comes from its candidate list") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    const SearchSpace space = tiny_space();
    const SearchResult result = random_search(space, 8, data, 29);
    for (const TrialResult& t : result.trials) {
        CHECK((t.config.hidden_count == 2 || t.config.hidden_count == 4));
        CHECK((t.config.pool_kind == PoolKind::mean || t.config.pool_kind == PoolKind::sum));
        CHECK(t.config.model_kind == ModelKind::rnn);
        CHECK(t.config.batch_size == 10);
        CHECK(t.config.max_epochs == 4);
        CHECK(t.config.patience == 4);
        CHECK(t.config.validation_fraction == 0.2);
    }
}

TEST_CASE("the winner has the best selection metric among successes") {
    const LabeledDataset data = make_sine_micro(6, 8, 13);
    SearchSpace space = tiny_space();
    space.select_by = SelectBy::train;
    const SearchResult result = random_search(space, 6, data, 31);
    for (const TrialResult& t : result.trials) {
        if (t.failed) continue;
        CHECK(t.train_accuracy <= result.best().train_accuracy);
    }

    space.select_by = SelectBy::validation;
    const SearchResult byval = random_search(space, 6, data, 31);
    for (const TrialResult& t : byval.trials) {
        if (t.failed) continue;
        CHECK(t.val_accuracy <= byval.best().val_accuracy);
    }
}

TEST_CASE("failing trials are recorded without sinking the search") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    SearchSpace space = tiny_space();
    // an absurd learning rate makes sgd trials blow past the divergence
    // guard while rprop trials survive
    space.optimizers = {OptimizerKind::sgd, OptimizerKind::rprop};
    space.learning_rates = {1e12};
    const SearchResult result = random_search(space, 8, data, 37);

    std::size_t failures = 0;
    for (const TrialResult& t : result.trials) {
        if (t.failed) {
            ++failures;
            CHECK(!t.error.empty());
            CHECK(t.config.optimizer == OptimizerKind::sgd);
        }
    }
    CHECK(failures > 0);
    CHECK(failures < result.trials.size());
    CHECK(!result.best().failed);
}

TEST_CASE("a search where every trial fails throws") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    SearchSpace space = tiny_space();
    space.optimizers = {OptimizerKind::sgd};
    space.learning_rates = {1e12};
    CHECK_THROWS_AS(random_search(space, 3, data, 41), DivergenceError);
}

TEST_CASE("empty candidate lists and zero trials are rejected") {
    const LabeledDataset data = make_sine_micro(5, 8, 13);
    SearchSpace space = tiny_space();
    space.pools = {};
    CHECK_THROWS_AS(random_search(space, 2, data, 43), ConfigError);
    CHECK_THROWS_AS(random_search(tiny_space(), 0, data, 43), ConfigError);
}

TEST_CASE("selection names round-trip") {
    for (SelectBy s : {SelectBy::train, SelectBy::validation})
        CHECK(select_by_from_string(to_string(s)) == s);
    CHECK_THROWS_AS(select_by_from_string("test"), std::invalid_argument);
}
