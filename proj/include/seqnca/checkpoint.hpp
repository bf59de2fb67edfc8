#pragma once

#include <filesystem>

#include <json.hpp>

#include "seqnca/search.hpp"
#include "seqnca/trainer.hpp"

namespace seqnca {

/// Versioned, human-inspectable snapshot of a trained model: parameters
/// with named shapes, the pooling operator, the fitted preprocessing
/// statistics and the training configuration. Keys are emitted sorted, so
/// save -> load -> save is byte-identical; anything time-dependent belongs
/// in the free-form meta object.
struct Checkpoint {
    static constexpr int current_version = 1;

    int format_version = current_version;
    ModelParams params;
    PoolKind pool_kind = PoolKind::mean;
    PreprocessStats preprocess;
    TrainConfig config;
    nlohmann::json meta = nlohmann::json::object();
};

nlohmann::json to_json(const Checkpoint& cp);
Checkpoint checkpoint_from_json(const nlohmann::json& j);

void save_checkpoint(const Checkpoint& cp, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Config documents. Every key is optional with the defaults of the
/// corresponding struct; unknown keys are rejected by name.
nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& j);
TrainConfig load_train_config(const std::filesystem::path& path);

nlohmann::json to_json(const PreprocessMode& mode);
PreprocessMode preprocess_mode_from_json(const nlohmann::json& j);

SearchSpace search_space_from_json(const nlohmann::json& j);
SearchSpace load_search_space(const std::filesystem::path& path);

/// Machine-readable report pieces printed by the command-line tool.
/// Wall-clock times are deliberately absent: with a fixed seed these
/// payloads are byte-identical across runs.
nlohmann::json to_json(const EpochStats& stats, std::size_t epoch);
nlohmann::json to_json(const EvalMetrics& metrics);
nlohmann::json to_json(const TrialResult& trial);

}  // namespace seqnca
