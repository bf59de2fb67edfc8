// seqnca-datagen: write synthetic benchmark datasets in the UCR text
// format. The control-chart and two-patterns generators follow the classic
// published recipes, so they stand in for the archive files when those are
// not at hand; sine-micro is the tiny trainability workload.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "seqnca/synthdata.hpp"

using namespace seqnca;

int main(int argc, char** argv) {
    CLI::App app{"synthetic sequence dataset generator (UCR text format)"};
    std::string dataset;
    std::string train_path;
    std::string test_path;
    std::uint64_t seed = 1;
    std::size_t train_size = 0;  // 0 = dataset default
    std::size_t test_size = 0;
    bool force = false;

    app.add_option("--dataset", dataset, "control-charts | two-patterns | sine-micro")
        ->required()
        ->check(CLI::IsMember({"control-charts", "two-patterns", "sine-micro"}));
    app.add_option("--out-train", train_path, "training split to write")->required();
    app.add_option("--out-test", test_path, "test split to write")->required();
    app.add_option("--seed", seed, "generator seed");
    app.add_option("--train-size", train_size, "training sequences (default per dataset)");
    app.add_option("--test-size", test_size, "test sequences (default per dataset)");
    app.add_flag("--force", force, "overwrite existing outputs");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        for (const auto& path : {train_path, test_path})
            if (!force && std::filesystem::exists(path)) {
                std::cerr << "error: output path already exists (pass --force to overwrite): "
                          << path << '\n';
                return 1;
            }

        LabeledDataset train, test;
        if (dataset == "control-charts") {
            if (train_size == 0) train_size = 300;
            if (test_size == 0) test_size = 300;
            train = make_control_charts(train_size / 6, 60, seed);
            test = make_control_charts(test_size / 6, 60, seed + 1);
        } else if (dataset == "two-patterns") {
            if (train_size == 0) train_size = 1000;
            if (test_size == 0) test_size = 4000;
            train = make_two_patterns(train_size, 128, seed);
            test = make_two_patterns(test_size, 128, seed + 1);
        } else {
            if (train_size == 0) train_size = 20;
            if (test_size == 0) test_size = 20;
            train = make_sine_micro(train_size / 2, 30, seed);
            test = make_sine_micro(test_size / 2, 30, seed + 1);
        }
        save_ucr(train, train_path);
        save_ucr(test, test_path);
        std::cerr << train.size() << " training and " << test.size()
                  << " test sequences written\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
