#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "seqnca/sequence.hpp"

namespace seqnca {

/// Sequences with dense 0-based class ids. class_names maps each id back to
/// the label token it was densified from; unlabeled entries carry id -1.
struct LabeledDataset {
    std::vector<Sequence> sequences;
    std::vector<int> labels;
    std::vector<std::string> class_names;

    std::size_t size() const { return sequences.size(); }
    std::size_t num_classes() const { return class_names.size(); }
    std::size_t input_dim() const { return sequences.empty() ? 0 : sequences.front().dim(); }
    std::size_t total_timesteps() const;
    void check() const;
};

/// UCR text format: one sequence per nonempty line, label first, then the
/// values, comma- or whitespace-separated. All rows must have equal length.
/// A "?" label marks an unlabeled sequence (id -1).
LabeledDataset load_ucr(const std::filesystem::path& path);

/// Inverse of load_ucr at full precision (17 significant digits).
void save_ucr(const LabeledDataset& data, const std::filesystem::path& path);

enum class PreprocessScope { none, per_sequence, global };

struct PreprocessMode {
    PreprocessScope scope = PreprocessScope::none;
    bool center = true;
    bool whiten = true;

    bool operator==(const PreprocessMode&) const = default;
};

const char* to_string(PreprocessScope scope);
PreprocessScope scope_from_string(std::string_view name);

/// Everything needed to replay a fitted transform on new data. mean/stddev
/// are per input dimension and only populated for the global scope; zero
/// standard deviations are replaced by 1 with a warning record.
struct PreprocessStats {
    PreprocessMode mode;
    Vector mean;
    Vector stddev;
    std::vector<std::string> warnings;
};

/// Fit the transform on (training) data and apply it. Population (1/N)
/// standard deviation throughout.
std::pair<LabeledDataset, PreprocessStats> preprocess(const LabeledDataset& data,
                                                      PreprocessMode mode);

/// Replay a fitted transform (e.g. on test data). Per-sequence scope
/// recomputes statistics per sequence; global scope reuses the stored ones.
LabeledDataset apply_preprocess(const LabeledDataset& data, const PreprocessStats& stats,
                                std::vector<std::string>* warnings = nullptr);

/// Seeded shuffle split into consecutive chunks of batch_size. The last
/// chunk may be smaller but never a singleton: a trailing single index is
/// merged into the previous batch. Requires batch_size >= 2.
std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   std::uint64_t seed);

}  // namespace seqnca
