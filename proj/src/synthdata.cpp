#include "seqnca/synthdata.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace seqnca {

namespace {

void add_class_names(LabeledDataset& data, std::size_t count) {
    for (std::size_t c = 1; c <= count; ++c) data.class_names.push_back(std::to_string(c));
}

}  // namespace

LabeledDataset make_sine_micro(std::size_t per_class, std::size_t length, std::uint64_t seed) {
    if (per_class == 0 || length == 0)
        throw std::invalid_argument("sine micro-dataset needs positive sizes");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
    std::normal_distribution<double> noise(0.0, 0.1);

    LabeledDataset data;
    add_class_names(data, 2);
    for (int label = 0; label < 2; ++label) {
        const double cycles = label == 0 ? 1.0 : 2.0;
        for (std::size_t i = 0; i < per_class; ++i) {
            const double p = phase(rng);
            Vector v(length);
            for (std::size_t t = 0; t < length; ++t)
                v[t] = std::sin(2.0 * std::numbers::pi * cycles * static_cast<double>(t) /
                                    static_cast<double>(length) +
                                p) +
                       noise(rng);
            data.sequences.push_back(Sequence::univariate(v));
            data.labels.push_back(label);
        }
    }
    return data;
}

LabeledDataset make_control_charts(std::size_t per_class, std::size_t length,
                                   std::uint64_t seed) {
    if (per_class == 0 || length < 3)
        throw std::invalid_argument("control charts need positive sizes and length >= 3");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> noise(-3.0, 3.0);
    std::uniform_real_distribution<double> cycle_amp(10.0, 15.0);
    std::uniform_real_distribution<double> cycle_period(10.0, 15.0);
    std::uniform_real_distribution<double> gradient(0.2, 0.5);
    std::uniform_real_distribution<double> shift(7.5, 20.0);
    std::uniform_int_distribution<std::size_t> changepoint(length / 3, 2 * length / 3);

    const double mean = 30.0;
    const double spread = 2.0;

    LabeledDataset data;
    add_class_names(data, 6);
    for (int label = 0; label < 6; ++label) {
        for (std::size_t i = 0; i < per_class; ++i) {
            const double a = cycle_amp(rng);
            const double period = cycle_period(rng);
            const double g = gradient(rng);
            const double x = shift(rng);
            const std::size_t t3 = changepoint(rng);
            Vector v(length);
            for (std::size_t t = 0; t < length; ++t) {
                double y = mean + noise(rng) * spread;
                const auto td = static_cast<double>(t);
                switch (label) {
                    case 0: break;  // normal
                    case 1: y += a * std::sin(2.0 * std::numbers::pi * td / period); break;
                    case 2: y += g * td; break;
                    case 3: y -= g * td; break;
                    case 4: y += t >= t3 ? x : 0.0; break;
                    case 5: y -= t >= t3 ? x : 0.0; break;
                }
                v[t] = y;
            }
            data.sequences.push_back(Sequence::univariate(v));
            data.labels.push_back(label);
        }
    }
    return data;
}

LabeledDataset make_two_patterns(std::size_t count, std::size_t length, std::uint64_t seed) {
    if (count == 0 || length < 16)
        throw std::invalid_argument("two-patterns needs a positive count and length >= 16");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, 1.0);
    const std::size_t pattern_len = length / 8;

    LabeledDataset data;
    add_class_names(data, 4);
    for (std::size_t i = 0; i < count; ++i) {
        const int label = static_cast<int>(i % 4);
        const bool first_up = label < 2;        // classes: UU, UD, DU, DD
        const bool second_up = label % 2 == 0;

        // two non-overlapping pattern windows, first strictly before second
        std::uniform_int_distribution<std::size_t> first_pos(0, length - 2 * pattern_len);
        const std::size_t p1 = first_pos(rng);
        std::uniform_int_distribution<std::size_t> second_pos(p1 + pattern_len,
                                                              length - pattern_len);
        const std::size_t p2 = second_pos(rng);

        Vector v(length);
        for (double& y : v) y = noise(rng);
        const auto plant = [&](std::size_t pos, bool up) {
            for (std::size_t t = 0; t < pattern_len; ++t) {
                const bool low = t < pattern_len / 2;
                v[pos + t] = (low == up) ? -5.0 : 5.0;
            }
        };
        plant(p1, first_up);
        plant(p2, second_up);
        data.sequences.push_back(Sequence::univariate(v));
        data.labels.push_back(label);
    }

    // balanced by construction; shuffle so splits and batches see mixed labels
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::shuffle(order.begin(), order.end(), rng);
    LabeledDataset shuffled;
    shuffled.class_names = data.class_names;
    for (std::size_t idx : order) {
        shuffled.sequences.push_back(std::move(data.sequences[idx]));
        shuffled.labels.push_back(data.labels[idx]);
    }
    return shuffled;
}

}  // namespace seqnca
