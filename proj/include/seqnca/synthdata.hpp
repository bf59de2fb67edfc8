#pragma once

#include <cstdint>

#include "seqnca/dataset.hpp"

namespace seqnca {

/// Two-class micro-dataset of noisy sine waves whose frequency depends on
/// the class (one vs. two full periods over the window, random phase).
/// Small enough to overfit in seconds; the standard trainability check.
LabeledDataset make_sine_micro(std::size_t per_class, std::size_t length, std::uint64_t seed);

/// Six-class control-chart series built from the classic recipe: a noisy
/// baseline (mean 30, uniform noise of amplitude 6) plus per-class
/// structure — nothing, a sine cycle, an up/down linear trend, or an
/// up/down level shift at a random changepoint in the middle third.
LabeledDataset make_control_charts(std::size_t per_class, std::size_t length,
                                   std::uint64_t seed);

/// Four-class series over standard-normal background noise with two step
/// patterns (up-step or down-step) planted at random non-overlapping
/// positions; the class is the ordered pair of step directions. Classes are
/// balanced round-robin, then the sequence order is shuffled.
LabeledDataset make_two_patterns(std::size_t count, std::size_t length, std::uint64_t seed);

}  // namespace seqnca
