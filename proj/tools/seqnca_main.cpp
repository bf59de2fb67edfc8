// seqnca: train fixed-length sequence embeddings with a neighbourhood
// objective, then embed, classify, evaluate or run a random hyperparameter
// search. Standard output carries machine-readable payload only; all
// diagnostics go to the error stream. Exit codes: 0 success, 1 other
// failure, 2 config error, 3 data error, 4 training divergence, 5 dimension
// mismatch, 6 neighbour count out of range (usage errors exit with the
// argument parser's own codes, all >= 100).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqnca/checkpoint.hpp"
#include "seqnca/errors.hpp"
#include "seqnca/knn.hpp"
#include "seqnca/search.hpp"
#include "seqnca/synthdata.hpp"
#include "seqnca/trainer.hpp"

namespace fs = std::filesystem;
using namespace seqnca;

namespace {

constexpr int exit_other = 1;
constexpr int exit_config = 2;
constexpr int exit_data = 3;
constexpr int exit_divergence = 4;
constexpr int exit_dimension = 5;
constexpr int exit_k_range = 6;

void ensure_writable(const fs::path& path, bool force) {
    if (!force && fs::exists(path))
        throw std::runtime_error("output path already exists (pass --force to overwrite): " +
                                 path.string());
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Options {
    std::string config_path;
    std::string data_path;
    std::string train_path;
    std::string test_path;
    std::string checkpoint_path;
    std::string out_path;
    std::size_t k = 1;
    std::size_t trials = 50;
    std::uint64_t seed = 1;
    bool seed_given = false;
    bool force = false;
};

int cmd_train(const Options& opt) {
    TrainConfig config = load_train_config(opt.config_path);
    if (opt.seed_given) config.seed = opt.seed;
    const LabeledDataset data = load_ucr(opt.data_path);
    ensure_writable(opt.out_path, opt.force);

    const TrainReport report = train(config, data);
    print_warnings(report.warnings);

    Checkpoint cp;
    cp.params = report.params;
    cp.pool_kind = config.pool_kind;
    cp.preprocess = report.preprocess;
    cp.config = config;
    cp.meta = nlohmann::json{{"data", opt.data_path}};
    save_checkpoint(cp, opt.out_path);

    for (std::size_t e = 0; e < report.history.size(); ++e)
        std::cout << to_json(report.history[e], e).dump() << '\n';

    double total_seconds = 0.0;
    for (const auto& stats : report.history) total_seconds += stats.seconds;
    std::cerr << "trained " << report.history.size() << " epochs in " << total_seconds
              << " s; best epoch " << report.best_epoch << " (validation accuracy "
              << report.history[report.best_epoch].val_accuracy << ")\n";
    std::cerr << "checkpoint written to " << opt.out_path << '\n';
    return 0;
}

int cmd_embed(const Options& opt) {
    const Checkpoint cp = load_checkpoint(opt.checkpoint_path);
    const LabeledDataset raw = load_ucr(opt.data_path);
    ensure_writable(opt.out_path, opt.force);

    std::vector<std::string> warnings;
    const LabeledDataset data = apply_preprocess(raw, cp.preprocess, &warnings);
    print_warnings(warnings);
    const EmbeddingSet set = embed_dataset(cp.params, cp.pool_kind, data);

    std::ofstream out(opt.out_path);
    if (!out) throw DataError("cannot write embeddings: " + opt.out_path);
    out << "id,label";
    for (std::size_t d = 0; d < set.dim(); ++d) out << ",e" << d;
    out << '\n';
    for (std::size_t i = 0; i < set.size(); ++i) {
        out << i << ',' << set.labels[i];
        for (double v : set.embeddings.row(i)) out << ',' << format_g17(v);
        out << '\n';
    }
    if (!out) throw DataError("embedding write failed: " + opt.out_path);
    std::cerr << set.size() << " embeddings written to " << opt.out_path << '\n';
    return 0;
}

int cmd_classify(const Options& opt) {
    const Checkpoint cp = load_checkpoint(opt.checkpoint_path);
    const LabeledDataset train_raw = load_ucr(opt.train_path);
    const LabeledDataset query_raw = load_ucr(opt.data_path);
    for (int l : train_raw.labels)
        if (l < 0) throw DataError("classification needs fully labeled training data");
    if (opt.k > train_raw.size()) {
        std::cerr << "error: k=" << opt.k << " exceeds the " << train_raw.size()
                  << " training sequences\n";
        return exit_k_range;
    }

    std::vector<std::string> warnings;
    const LabeledDataset train_data = apply_preprocess(train_raw, cp.preprocess, &warnings);
    const LabeledDataset query_data = apply_preprocess(query_raw, cp.preprocess, &warnings);
    print_warnings(warnings);

    const NeighbourIndex index(embed_dataset(cp.params, cp.pool_kind, train_data));
    const EmbeddingSet queries = embed_dataset(cp.params, cp.pool_kind, query_data);
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto point = queries.embeddings.row(i);
        const int predicted = knn_classify(index, point, opt.k);
        const auto hits = index.query(point, 1);
        std::cout << i << ',' << train_raw.class_names[predicted] << ','
                  << format_g17(std::sqrt(hits.front().sq_dist)) << '\n';
    }
    return 0;
}

int cmd_eval(const Options& opt) {
    const Checkpoint cp = load_checkpoint(opt.checkpoint_path);
    const LabeledDataset train_raw = load_ucr(opt.train_path);
    const LabeledDataset test_raw = load_ucr(opt.test_path);
    if (opt.k > train_raw.size()) {
        std::cerr << "error: k=" << opt.k << " exceeds the " << train_raw.size()
                  << " training sequences\n";
        return exit_k_range;
    }

    std::vector<std::string> warnings;
    const LabeledDataset train_data = apply_preprocess(train_raw, cp.preprocess, &warnings);
    const LabeledDataset test_data = apply_preprocess(test_raw, cp.preprocess, &warnings);
    print_warnings(warnings);

    const EvalMetrics metrics =
        evaluate(cp.params, cp.pool_kind, train_data, test_data, opt.k);
    std::cout << to_json(metrics).dump() << '\n';
    return 0;
}

int cmd_search(const Options& opt) {
    const SearchSpace space = load_search_space(opt.config_path);
    const LabeledDataset data = load_ucr(opt.data_path);

    const fs::path outdir(opt.out_path);
    fs::create_directories(outdir);
    const fs::path trials_path = outdir / "trials.jsonl";
    const fs::path best_path = outdir / "best.json";
    const fs::path best_cp_path = outdir / "best_checkpoint.json";
    ensure_writable(trials_path, opt.force);
    ensure_writable(best_path, opt.force);
    ensure_writable(best_cp_path, opt.force);

    const SearchResult result = random_search(space, opt.trials, data, opt.seed);

    std::ofstream trials_out(trials_path);
    if (!trials_out) throw DataError("cannot write trial results: " + trials_path.string());
    for (const auto& trial : result.trials) {
        trials_out << to_json(trial).dump() << '\n';
        std::cerr << "trial " << trial.index << ": "
                  << (trial.failed ? "failed: " + trial.error
                                   : "train_acc=" + std::to_string(trial.train_accuracy) +
                                         " val_acc=" + std::to_string(trial.val_accuracy))
                  << " (" << trial.seconds << " s)\n";
    }

    Checkpoint cp;
    cp.params = result.best_report.params;
    cp.pool_kind = result.best().config.pool_kind;
    cp.preprocess = result.best_report.preprocess;
    cp.config = result.best().config;
    cp.meta = nlohmann::json{{"data", opt.data_path}, {"search_trial", result.best_index}};
    save_checkpoint(cp, best_cp_path);

    nlohmann::json best = to_json(result.best());
    best["checkpoint"] = best_cp_path.string();
    std::ofstream best_out(best_path);
    if (!best_out) throw DataError("cannot write best trial: " + best_path.string());
    best_out << best.dump(2) << '\n';

    std::cout << best.dump() << '\n';
    std::cerr << "results in " << outdir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fixed-length sequence embeddings trained with a neighbourhood objective"};
    app.require_subcommand(1);
    Options opt;

    auto* train_cmd = app.add_subcommand("train", "train a model and write a checkpoint");
    train_cmd->add_option("--config", opt.config_path, "training config (JSON)")->required();
    train_cmd->add_option("--data", opt.data_path, "training data (UCR text)")->required();
    train_cmd->add_option("--out", opt.out_path, "checkpoint to write")->required();
    train_cmd->add_option("--seed", opt.seed, "override the config seed");
    train_cmd->add_flag("--force", opt.force, "overwrite existing outputs");

    auto* embed_cmd = app.add_subcommand("embed", "embed sequences into CSV");
    embed_cmd->add_option("--checkpoint", opt.checkpoint_path, "trained checkpoint")->required();
    embed_cmd->add_option("--data", opt.data_path, "sequences to embed (UCR text)")->required();
    embed_cmd->add_option("--out", opt.out_path, "CSV to write")->required();
    embed_cmd->add_flag("--force", opt.force, "overwrite existing outputs");

    auto* classify_cmd = app.add_subcommand("classify", "nearest-neighbour classification");
    classify_cmd->add_option("--checkpoint", opt.checkpoint_path, "trained checkpoint")
        ->required();
    classify_cmd->add_option("--train-data", opt.train_path, "labeled reference data")
        ->required();
    classify_cmd->add_option("--data", opt.data_path, "query sequences")->required();
    classify_cmd->add_option("--k", opt.k, "neighbour count")->check(CLI::PositiveNumber);

    auto* eval_cmd = app.add_subcommand("eval", "accuracy metrics on a train/test split");
    eval_cmd->add_option("--checkpoint", opt.checkpoint_path, "trained checkpoint")->required();
    eval_cmd->add_option("--train-data", opt.train_path, "labeled training data")->required();
    eval_cmd->add_option("--test-data", opt.test_path, "labeled test data")->required();
    eval_cmd->add_option("--k", opt.k, "neighbour count")->check(CLI::PositiveNumber);

    auto* search_cmd = app.add_subcommand("search", "random hyperparameter search");
    search_cmd->add_option("--config", opt.config_path, "search space (JSON)")->required();
    search_cmd->add_option("--data", opt.data_path, "training data (UCR text)")->required();
    search_cmd->add_option("--trials", opt.trials, "number of trials")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--seed", opt.seed, "master seed");
    search_cmd->add_option("--out", opt.out_path, "output directory")->required();
    search_cmd->add_flag("--force", opt.force, "overwrite existing outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    opt.seed_given = train_cmd->count("--seed") > 0;

    try {
        if (*train_cmd) return cmd_train(opt);
        if (*embed_cmd) return cmd_embed(opt);
        if (*classify_cmd) return cmd_classify(opt);
        if (*eval_cmd) return cmd_eval(opt);
        if (*search_cmd) return cmd_search(opt);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_config;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_data;
    } catch (const DivergenceError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_divergence;
    } catch (const DimensionError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_dimension;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_other;
    }
    return exit_other;
}
