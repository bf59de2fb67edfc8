#include "seqnca/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "seqnca/errors.hpp"

namespace seqnca {

std::size_t LabeledDataset::total_timesteps() const {
    std::size_t total = 0;
    for (const auto& s : sequences) total += s.length();
    return total;
}

void LabeledDataset::check() const {
    if (labels.size() != sequences.size())
        throw DataError("dataset: " + std::to_string(labels.size()) + " labels for " +
                        std::to_string(sequences.size()) + " sequences");
    for (int l : labels)
        if (l != -1 && (l < 0 || static_cast<std::size_t>(l) >= class_names.size()))
            throw DataError("dataset: class id " + std::to_string(l) + " out of range");
}

namespace {

struct Token {
    std::string_view text;
    std::size_t column;  // 1-based character offset
};

std::vector<Token> tokenize(std::string_view line) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (std::isspace(static_cast<unsigned char>(line[i])) ||
                                   line[i] == ','))
            ++i;
        if (i >= line.size()) break;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) &&
               line[i] != ',')
            ++i;
        tokens.push_back({line.substr(start, i - start), start + 1});
    }
    return tokens;
}

double parse_number(const Token& tok, const std::filesystem::path& path, std::size_t lineno) {
    double value = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        std::ostringstream os;
        os << path.string() << ":" << lineno << ":" << tok.column << ": non-numeric token '"
           << tok.text << "'";
        throw DataError(os.str());
    }
    return value;
}

std::string format_label(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", value);
    return buf;
}

}  // namespace

LabeledDataset load_ucr(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open data file: " + path.string());

    LabeledDataset data;
    std::map<double, int> label_ids;
    std::size_t expected_len = 0;
    std::string line;
    std::size_t lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = tokenize(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 2) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": line has a label but no values";
            throw DataError(os.str());
        }

        int id = -1;
        if (tokens[0].text != "?") {
            const double raw = parse_number(tokens[0], path, lineno);
            const auto [it, inserted] =
                label_ids.emplace(raw, static_cast<int>(data.class_names.size()));
            if (inserted) data.class_names.push_back(format_label(raw));
            id = it->second;
        }

        const std::size_t len = tokens.size() - 1;
        if (expected_len == 0) {
            expected_len = len;
        } else if (len != expected_len) {
            std::ostringstream os;
            os << path.string() << ":" << lineno << ": ragged row (" << len << " values, "
               << "expected " << expected_len << ")";
            throw DataError(os.str());
        }

        Matrix values(len, 1);
        for (std::size_t j = 0; j < len; ++j)
            values(j, 0) = parse_number(tokens[j + 1], path, lineno);
        data.sequences.emplace_back(std::move(values));
        data.labels.push_back(id);
    }

    if (data.sequences.empty()) throw DataError("no sequences in data file: " + path.string());
    return data;
}

void save_ucr(const LabeledDataset& data, const std::filesystem::path& path) {
    data.check();
    std::ofstream out(path);
    if (!out) throw DataError("cannot write data file: " + path.string());
    char buf[64];
    for (std::size_t i = 0; i < data.size(); ++i) {
        const Sequence& seq = data.sequences[i];
        if (seq.dim() != 1)
            throw DataError("save_ucr: only univariate sequences can be written");
        out << (data.labels[i] == -1 ? std::string("?") : data.class_names[data.labels[i]]);
        for (std::size_t t = 0; t < seq.length(); ++t) {
            std::snprintf(buf, sizeof buf, ",%.17g", seq.values(t, 0));
            out << buf;
        }
        out << '\n';
    }
    if (!out) throw DataError("write failed: " + path.string());
}

const char* to_string(PreprocessScope scope) {
    switch (scope) {
        case PreprocessScope::none: return "none";
        case PreprocessScope::per_sequence: return "per_sequence";
        case PreprocessScope::global: return "global";
    }
    return "?";
}

PreprocessScope scope_from_string(std::string_view name) {
    if (name == "none") return PreprocessScope::none;
    if (name == "per_sequence") return PreprocessScope::per_sequence;
    if (name == "global") return PreprocessScope::global;
    throw std::invalid_argument("unknown preprocessing scope: " + std::string(name));
}

namespace {

// population mean/std per dimension over a range of (sequence, timestep) values
void accumulate_moments(const Sequence& seq, Vector& sum, Vector& sq_sum) {
    for (std::size_t t = 0; t < seq.length(); ++t) {
        const auto row = seq.step(t);
        for (std::size_t d = 0; d < row.size(); ++d) {
            sum[d] += row[d];
            sq_sum[d] += row[d] * row[d];
        }
    }
}

void finish_moments(Vector& sum, Vector& sq_sum, double count, Vector& mean, Vector& stddev) {
    const std::size_t dims = sum.size();
    mean.resize(dims);
    stddev.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        mean[d] = sum[d] / count;
        const double var = std::max(0.0, sq_sum[d] / count - mean[d] * mean[d]);
        stddev[d] = std::sqrt(var);
    }
}

Sequence transform_sequence(const Sequence& seq, const PreprocessMode& mode,
                            const Vector& mean, const Vector& stddev,
                            std::vector<std::string>* warnings, std::size_t seq_index) {
    Matrix out = seq.values;
    const std::size_t dims = seq.dim();
    for (std::size_t d = 0; d < dims; ++d) {
        const double mu = mode.center ? mean[d] : 0.0;
        double sd = mode.whiten ? stddev[d] : 1.0;
        if (mode.whiten && sd == 0.0) {
            sd = 1.0;
            if (warnings)
                warnings->push_back("zero standard deviation in dimension " +
                                    std::to_string(d) +
                                    (mode.scope == PreprocessScope::per_sequence
                                         ? " of sequence " + std::to_string(seq_index)
                                         : std::string()) +
                                    "; dividing by 1");
        }
        for (std::size_t t = 0; t < seq.length(); ++t) out(t, d) = (out(t, d) - mu) / sd;
    }
    return Sequence(std::move(out));
}

}  // namespace

std::pair<LabeledDataset, PreprocessStats> preprocess(const LabeledDataset& data,
                                                      PreprocessMode mode) {
    if (data.size() == 0) throw DataError("preprocess: empty dataset");
    data.check();

    PreprocessStats stats;
    stats.mode = mode;
    if (mode.scope == PreprocessScope::global) {
        Vector sum(data.input_dim(), 0.0), sq_sum(data.input_dim(), 0.0);
        for (const auto& seq : data.sequences) accumulate_moments(seq, sum, sq_sum);
        finish_moments(sum, sq_sum, static_cast<double>(data.total_timesteps()), stats.mean,
                       stats.stddev);
        // fix up degenerate dimensions once at fit time, so the stored
        // statistics replay cleanly and the warning appears exactly once
        for (std::size_t d = 0; d < stats.stddev.size(); ++d) {
            if (mode.whiten && stats.stddev[d] == 0.0) {
                stats.stddev[d] = 1.0;
                stats.warnings.push_back("zero standard deviation in dimension " +
                                         std::to_string(d) + "; dividing by 1");
            }
        }
    }
    LabeledDataset out = apply_preprocess(data, stats, &stats.warnings);
    return {std::move(out), std::move(stats)};
}

LabeledDataset apply_preprocess(const LabeledDataset& data, const PreprocessStats& stats,
                                std::vector<std::string>* warnings) {
    data.check();
    const PreprocessMode& mode = stats.mode;
    LabeledDataset out;
    out.labels = data.labels;
    out.class_names = data.class_names;
    out.sequences.reserve(data.size());

    switch (mode.scope) {
        case PreprocessScope::none:
            out.sequences = data.sequences;
            break;
        case PreprocessScope::per_sequence:
            for (std::size_t i = 0; i < data.size(); ++i) {
                const Sequence& seq = data.sequences[i];
                Vector sum(seq.dim(), 0.0), sq_sum(seq.dim(), 0.0), mean, stddev;
                accumulate_moments(seq, sum, sq_sum);
                finish_moments(sum, sq_sum, static_cast<double>(seq.length()), mean, stddev);
                out.sequences.push_back(
                    transform_sequence(seq, mode, mean, stddev, warnings, i));
            }
            break;
        case PreprocessScope::global:
            if (stats.mean.size() != data.input_dim())
                throw DimensionError("stored preprocessing statistics cover " +
                                     std::to_string(stats.mean.size()) +
                                     " dimensions, data has " +
                                     std::to_string(data.input_dim()));
            for (std::size_t i = 0; i < data.size(); ++i)
                out.sequences.push_back(transform_sequence(data.sequences[i], mode, stats.mean,
                                                           stats.stddev, warnings, i));
            break;
    }
    return out;
}

std::vector<std::vector<std::size_t>> make_batches(std::size_t count, std::size_t batch_size,
                                                   std::uint64_t seed) {
    if (batch_size < 2)
        throw std::invalid_argument("make_batches: batch_size must be at least 2, got " +
                                    std::to_string(batch_size));

    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<std::vector<std::size_t>> batches;
    for (std::size_t start = 0; start < count; start += batch_size) {
        const std::size_t end = std::min(count, start + batch_size);
        batches.emplace_back(order.begin() + start, order.begin() + end);
    }
    if (batches.size() > 1 && batches.back().size() == 1) {
        batches[batches.size() - 2].push_back(batches.back().front());
        batches.pop_back();
    }
    return batches;
}

}  // namespace seqnca
